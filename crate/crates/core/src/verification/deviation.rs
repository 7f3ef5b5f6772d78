use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::families::{random_profile, structured_profiles};
use crate::error::{Error, Result};
use crate::format::ser_f64;
use crate::mechanisms::{emit_atoms, MechanismSpec, Reports};
use crate::model::{Cost, LocationProfile, PNorm};

/// Misreport search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Uniform grid over `[min - 2 span, max + 2 span]`.
    pub grid_points: usize,
    /// Multipliers `c` for misreports `c * x_i`, stepping over `[-scale_range, scale_range]`.
    pub scale_step: f64,
    pub scale_range: f64,
    /// Golden-section iterations around the best grid candidate; 0 disables.
    pub refine_iterations: usize,
    /// Absolute violation threshold. Defaults to `1e-7 * (1 + span)`.
    pub violation_tol: Option<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_points: 2001,
            scale_step: 1.0 / 256.0,
            scale_range: 4.0,
            refine_iterations: 60,
            violation_tol: None,
        }
    }
}

impl SearchConfig {
    pub fn threshold(&self, profile: &LocationProfile) -> f64 {
        self.violation_tol.unwrap_or(1e-7 * (1.0 + profile.span()))
    }
}

/// Most profitable misreport found for one agent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    /// 1-based.
    pub agent: usize,
    pub true_profile: LocationProfile,
    #[serde(serialize_with = "ser_f64")]
    pub best_misreport: f64,
    pub truthful_cost: Cost,
    pub deviated_cost: Cost,
    /// `truthful_cost - deviated_cost`.
    #[serde(serialize_with = "ser_f64")]
    pub gain: f64,
    #[serde(serialize_with = "ser_f64")]
    pub threshold: f64,
    /// `gain > threshold`; smaller gains count as ties.
    pub violation: bool,
}

impl DeviationReport {
    pub(crate) fn new(
        agent: usize,
        true_profile: LocationProfile,
        best_misreport: f64,
        truthful_cost: f64,
        deviated_cost: f64,
        threshold: f64,
    ) -> Self {
        let gain = truthful_cost - deviated_cost;
        DeviationReport {
            agent,
            true_profile,
            best_misreport,
            truthful_cost: Cost::new(truthful_cost),
            deviated_cost: Cost::new(deviated_cost),
            gain,
            threshold,
            violation: gain > threshold,
        }
    }

    /// Worse-first ordering: larger gain, then lexicographically smaller
    /// profile, then smaller agent.
    fn severity_cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| {
                lex_cmp(
                    other.true_profile.locations(),
                    self.true_profile.locations(),
                )
            })
            .then_with(|| other.agent.cmp(&self.agent))
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Re-evaluates the mechanism with one agent's report replaced, without
/// rebuilding the profile.
pub(crate) struct Probe<'a> {
    spec: &'a MechanismSpec,
    p: PNorm,
    agent: usize,
    truth: f64,
    raw: Vec<f64>,
    others: Vec<f64>,
    sorted: Vec<f64>,
    atoms: Vec<(f64, f64)>,
}

impl<'a> Probe<'a> {
    pub(crate) fn new(
        spec: &'a MechanismSpec,
        profile: &LocationProfile,
        p: PNorm,
        agent: usize,
    ) -> Self {
        let raw = profile.locations().to_vec();
        let truth = raw[agent];
        let mut others: Vec<f64> = raw
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != agent)
            .map(|(_, &x)| x)
            .collect();
        others.sort_by(f64::total_cmp);
        Probe {
            spec,
            p,
            agent,
            truth,
            sorted: Vec::with_capacity(raw.len()),
            raw,
            others,
            atoms: Vec::with_capacity(8),
        }
    }

    /// Expected distance from the agent's true location when reporting `report`.
    pub(crate) fn cost(&mut self, report: f64) -> Result<f64> {
        self.raw[self.agent] = report;
        let at = self.others.partition_point(|&v| v < report);
        self.sorted.clear();
        self.sorted.extend_from_slice(&self.others[..at]);
        self.sorted.push(report);
        self.sorted.extend_from_slice(&self.others[at..]);
        self.atoms.clear();
        emit_atoms(
            self.spec,
            Reports {
                raw: &self.raw,
                sorted: &self.sorted,
            },
            self.p,
            1.0,
            &mut self.atoms,
        )?;
        let truth = self.truth;
        Ok(self
            .atoms
            .iter()
            .map(|&(loc, w)| w * (truth - loc).abs())
            .sum())
    }
}

/// Searches for the misreport of `agent` (1-based) that lowers their
/// expected distance the most.
///
/// Candidates are the other agents' locations, the extremes shifted by one
/// span either way, a uniform grid over `[min - 2 span, max + 2 span]`, the
/// scalings `c * x_agent`, and a golden-section pass around the best grid
/// candidate. The truthful report is the baseline, so `gain >= 0`.
pub fn best_deviation(
    spec: &MechanismSpec,
    profile: &LocationProfile,
    p: PNorm,
    agent: usize,
    cfg: &SearchConfig,
) -> Result<DeviationReport> {
    spec.validate()?;
    let n = profile.len();
    if agent == 0 || agent > n {
        return Err(Error::IndexOutOfRange { index: agent, n });
    }
    let mut probe = Probe::new(spec, profile, p, agent - 1);
    let truth = profile.locations()[agent - 1];
    let truthful = probe.cost(truth)?;

    let (lo, hi) = (profile.min(), profile.max());
    let span = profile.span();
    let width = if span > 0.0 { span } else { 1.0 };

    let mut best = (truth, truthful);
    let consider = |probe: &mut Probe, report: f64, best: &mut (f64, f64)| -> Result<()> {
        if report.is_finite() {
            let c = probe.cost(report)?;
            if c < best.1 {
                *best = (report, c);
            }
        }
        Ok(())
    };

    for (i, &x) in profile.locations().iter().enumerate() {
        if i != agent - 1 {
            consider(&mut probe, x, &mut best)?;
        }
    }
    for x in [lo - width, lo + width, hi - width, hi + width] {
        consider(&mut probe, x, &mut best)?;
    }
    let (g_lo, g_hi) = (lo - 2.0 * width, hi + 2.0 * width);
    let cells = cfg.grid_points.saturating_sub(1).max(1);
    let grid_step = (g_hi - g_lo) / cells as f64;
    for i in 0..cfg.grid_points {
        consider(&mut probe, g_lo + i as f64 * grid_step, &mut best)?;
    }
    if cfg.scale_step > 0.0 {
        let steps = (2.0 * cfg.scale_range / cfg.scale_step).round() as i64;
        for i in 0..=steps {
            let c = -cfg.scale_range + i as f64 * cfg.scale_step;
            consider(&mut probe, c * truth, &mut best)?;
        }
    }
    if cfg.refine_iterations > 0 && best.0 != truth {
        let refined = golden_section_min(
            |x| probe.cost(x),
            best.0 - grid_step,
            best.0 + grid_step,
            cfg.refine_iterations,
        )?;
        if refined.1 < best.1 {
            best = refined;
        }
    }

    Ok(DeviationReport::new(
        agent,
        profile.clone(),
        best.0,
        truthful,
        best.1,
        cfg.threshold(profile),
    ))
}

/// Golden-section search for a minimum of `f` on `[a, b]`; returns the best
/// point evaluated.
fn golden_section_min<F>(mut f: F, mut a: f64, mut b: f64, iterations: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iterations {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

/// Worst deviation over structured profiles plus `trials` random profiles
/// with coordinates uniform on `[0, 1)`, across all agents.
///
/// Falsification only: a clean scan does not prove strategyproofness.
pub fn sp_scan(
    spec: &MechanismSpec,
    p: PNorm,
    n: usize,
    trials: usize,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<DeviationReport> {
    if n < 2 {
        return Err(Error::InvalidProfile(format!(
            "need at least 2 agents, got {n}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidQuery("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profiles = structured_profiles(n, p)
        .into_iter()
        .chain((0..trials).map(|_| random_profile(&mut rng, n)));
    let mut worst: Option<DeviationReport> = None;
    for profile in profiles {
        for agent in 1..=n {
            let report = best_deviation(spec, &profile, p, agent, cfg)?;
            if worst
                .as_ref()
                .is_none_or(|w| report.severity_cmp(w) == Ordering::Greater)
            {
                worst = Some(report);
            }
        }
    }
    Ok(worst.expect("at least one profile"))
}
