//! Command-line front end: argument model and command execution.
//!
//! Commands return their rendered output and an exit code; the `facloc`
//! binary only prints and exits. Exit codes: 0 success, 1 internal error,
//! 2 bad input, 3 strategyproofness violation found.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::format::{sig17, Sig17};
use crate::mechanisms::MechanismSpec;
use crate::model::{Cost, FacilityDistribution, LocationProfile, PNorm};
use crate::optimizer::optimal_location;
use crate::verification::{
    ratio_of_distribution, sp_scan, three_point_frontier, worst_ratio_search, MixtureLowerBound,
    RatioSearchConfig, SearchConfig,
};

pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "facloc",
    version,
    about = "Strategyproof facility location under L_p social cost"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outcome distribution, expected cost and ratio on one profile.
    Eval(EvalArgs),
    /// Search for profitable misreports.
    Spcheck(SpcheckArgs),
    /// Worst approximation ratio found.
    Ratio(RatioArgs),
    /// Mixture lower-bound certificates over a list of k.
    Thm3(Thm3Args),
    /// Strategyproofness and ratio across the three-point family.
    Frontier(FrontierArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Inline profile, e.g. `0,1,2.5`.
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "profile_file"
    )]
    pub profile: Option<String>,
    /// One location per line.
    #[arg(long, conflicts_with = "profile")]
    pub profile_file: Option<PathBuf>,
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value = "2")]
    pub p: String,
}

#[derive(Debug, Args)]
pub struct SpcheckArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Absolute violation threshold (default `1e-7 * (1 + span)`).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 2001)]
    pub grid_points: usize,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub random: usize,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
}

#[derive(Debug, Args)]
pub struct Thm3Args {
    /// Integer exponent in [3, 16].
    #[arg(long)]
    pub p: String,
    /// Comma-separated list of k.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    /// Append the per-k root tables (CSV) or include them (JSON).
    #[arg(long)]
    pub roots: bool,
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    #[arg(long, default_value = "2")]
    pub p: String,
    /// Comma-separated q values in [0, 0.5]; defaults to 51 evenly spaced points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q_grid: Option<Vec<f64>>,
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Rendered command output.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

/// Error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub exit_code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit_code = match e {
            Error::Parse(_)
            | Error::InvalidNorm(_)
            | Error::InvalidProfile(_)
            | Error::InvalidWeight(_)
            | Error::InvalidQuery(_)
            | Error::ArityMismatch { .. }
            | Error::IndexOutOfRange { .. } => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            message: e.to_string(),
            exit_code,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        exit_code: EXIT_USAGE,
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        exit_code: EXIT_INTERNAL,
    }
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Eval(a) => eval(a, cli.format),
        Command::Spcheck(a) => spcheck(a, cli.format),
        Command::Ratio(a) => ratio_cmd(a, cli.format),
        Command::Thm3(a) => thm3(a, cli.format),
        Command::Frontier(a) => frontier(a, cli.format),
    }
}

/// Parses `args` (including the program name), executes, and writes the
/// output to `--out` when given. Returns the text meant for stdout and the
/// exit code; errors are rendered as messages for stderr.
pub fn run_from_args<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return if code == EXIT_OK {
                (e.to_string(), String::new(), code)
            } else {
                (String::new(), e.to_string(), code)
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => match &cli.out {
            Some(path) => match std::fs::write(path, &outcome.output) {
                Ok(()) => (String::new(), String::new(), outcome.exit_code),
                Err(e) => (
                    String::new(),
                    format!("cannot write {}: {e}", path.display()),
                    EXIT_INTERNAL,
                ),
            },
            None => (outcome.output, String::new(), outcome.exit_code),
        },
        Err(f) => (String::new(), f.message, f.exit_code),
    }
}

fn parse_spec(text: &str) -> Result<MechanismSpec, Failure> {
    text.parse().map_err(Failure::from)
}

fn parse_norm(text: &str) -> Result<PNorm, Failure> {
    text.parse().map_err(Failure::from)
}

fn load_profile(a: &EvalArgs) -> Result<LocationProfile, Failure> {
    match (&a.profile, &a.profile_file) {
        (Some(inline), _) => Ok(inline.parse()?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(text.parse()?)
        }
        (None, None) => Err(usage("either --profile or --profile-file is required")),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| internal(e.to_string()))
}

#[derive(Serialize)]
struct EvalReport<'a> {
    distribution: &'a FacilityDistribution,
    mechanism_cost: Cost,
    opt_location: Sig17,
    opt_cost: Cost,
    ratio: Sig17,
}

#[derive(Serialize)]
struct CertificateSummary {
    p: u32,
    k: usize,
    inverse_sum: Sig17,
    p_opt_bound: Sig17,
    ratio_lower_bound: Sig17,
}

fn eval(a: &EvalArgs, format: Format) -> Result<Outcome, Failure> {
    let profile = load_profile(a)?;
    let spec = parse_spec(&a.spec)?;
    let p = parse_norm(&a.p)?;
    let d = spec.run(&profile, p)?;
    let (mechanism_cost, _, ratio) = ratio_of_distribution(&profile, &d, p);
    let opt = optimal_location(&profile, p);
    let output = match format {
        Format::Json => to_json(&EvalReport {
            distribution: &d,
            mechanism_cost,
            opt_location: Sig17(opt.location),
            opt_cost: opt.cost,
            ratio: Sig17(ratio),
        })?,
        Format::Csv => {
            let atoms: Vec<String> = d
                .atoms()
                .iter()
                .map(|&(l, w)| format!("{}:{}", sig17(l), sig17(w)))
                .collect();
            format!(
                "mechanism_cost,opt_location,opt_cost,ratio,distribution\n{},{},{},{},{}\n",
                sig17(mechanism_cost.value()),
                sig17(opt.location),
                sig17(opt.cost.value()),
                sig17(ratio),
                atoms.join(";")
            )
        }
    };
    Ok(Outcome {
        output,
        exit_code: EXIT_OK,
    })
}

fn spcheck(a: &SpcheckArgs, format: Format) -> Result<Outcome, Failure> {
    let spec = parse_spec(&a.spec)?;
    let p = parse_norm(&a.p)?;
    if let Some(t) = a.tol {
        if t.is_nan() || t < 0.0 {
            return Err(usage(format!("--tol must be nonnegative, got {t}")));
        }
    }
    let cfg = SearchConfig {
        grid_points: a.grid_points,
        violation_tol: a.tol,
        ..SearchConfig::default()
    };
    let worst = sp_scan(&spec, p, a.n, a.trials, a.seed, &cfg)?;
    let output = match format {
        Format::Json => to_json(&worst)?,
        Format::Csv => format!(
            "agent,true_profile,best_misreport,truthful_cost,deviated_cost,gain,threshold,violation\n{},{},{},{},{},{},{},{}\n",
            worst.agent,
            join_sig17(worst.true_profile.locations()),
            sig17(worst.best_misreport),
            sig17(worst.truthful_cost.value()),
            sig17(worst.deviated_cost.value()),
            sig17(worst.gain),
            sig17(worst.threshold),
            worst.violation
        ),
    };
    Ok(Outcome {
        output,
        exit_code: if worst.violation {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        },
    })
}

fn join_sig17(xs: &[f64]) -> String {
    xs.iter().map(|&x| sig17(x)).collect::<Vec<_>>().join(";")
}

fn ratio_cmd(a: &RatioArgs, format: Format) -> Result<Outcome, Failure> {
    let spec = parse_spec(&a.spec)?;
    let p = parse_norm(&a.p)?;
    let cfg = RatioSearchConfig {
        random_profiles: a.random,
        hill_climb_iterations: a.iters,
        seed: a.seed,
    };
    let report = worst_ratio_search(&spec, p, a.n, &cfg)?;
    let output = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => format!(
            "spec,p,profile,mechanism_cost,opt_cost,ratio\n\"{}\",{},{},{},{},{}\n",
            report.spec,
            report.p,
            join_sig17(report.profile.locations()),
            sig17(report.mechanism_cost.value()),
            sig17(report.opt_cost.value()),
            sig17(report.ratio)
        ),
    };
    Ok(Outcome {
        output,
        exit_code: EXIT_OK,
    })
}

fn thm3(a: &Thm3Args, format: Format) -> Result<Outcome, Failure> {
    let p: u32 =
        a.p.trim()
            .parse()
            .map_err(|_| usage(format!("--p must be an integer in [3, 16], got `{}`", a.p)))?;
    let certs =
        a.k.iter()
            .map(|&k| MixtureLowerBound::compute(p, k))
            .collect::<Result<Vec<_>, _>>()?;
    let output = match format {
        Format::Json => {
            if a.roots {
                to_json(&certs)?
            } else {
                let rows: Vec<_> = certs
                    .iter()
                    .map(|c| CertificateSummary {
                        p: c.p,
                        k: c.k,
                        inverse_sum: Sig17(c.inverse_sum),
                        p_opt_bound: Sig17(c.p_opt_bound),
                        ratio_lower_bound: Sig17(c.ratio_lower_bound),
                    })
                    .collect();
                to_json(&rows)?
            }
        }
        Format::Csv => {
            let mut out = String::from("k,inverse_sum,p_opt_bound,ratio_lower_bound\n");
            for c in &certs {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    c.k,
                    sig17(c.inverse_sum),
                    sig17(c.p_opt_bound),
                    sig17(c.ratio_lower_bound)
                );
            }
            if a.roots {
                for c in &certs {
                    let _ = write!(out, "\n# k={}\n{}", c.k, c.root_table_csv());
                }
            }
            out
        }
    };
    Ok(Outcome {
        output,
        exit_code: EXIT_OK,
    })
}

pub fn default_q_grid() -> Vec<f64> {
    (0..=50).map(|i| i as f64 / 100.0).collect()
}

fn frontier(a: &FrontierArgs, format: Format) -> Result<Outcome, Failure> {
    let p = parse_norm(&a.p)?;
    let grid = a.q_grid.clone().unwrap_or_else(default_q_grid);
    if let Some(q) = grid.iter().find(|q| !(0.0..=0.5).contains(*q)) {
        return Err(usage(format!("q values must lie in [0, 0.5], got {q}")));
    }
    let cfg = SearchConfig {
        violation_tol: a.tol,
        ..SearchConfig::default()
    };
    let rows = three_point_frontier(p, &grid, &cfg)?;
    let output = match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out = String::from("q_end,lemma6_value,sp_verdict,gain,ratio\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    sig17(r.q_end),
                    sig17(r.margin),
                    r.strategyproof,
                    sig17(r.gain),
                    sig17(r.ratio)
                );
            }
            out
        }
    };
    Ok(Outcome {
        output,
        exit_code: EXIT_OK,
    })
}
