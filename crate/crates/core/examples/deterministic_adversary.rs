//! Refute deterministic rules: each either loses the ratio or can be gamed.

use facloc::verification::deterministic_oracle;
use facloc::{refute_deterministic, AdversarialVerdict, MechanismSpec, PNorm};

fn main() -> facloc::Result<()> {
    let p = PNorm::TWO;
    for spec in [
        MechanismSpec::Median,
        MechanismSpec::Dictator(1),
        MechanismSpec::Optimal(None),
    ] {
        let oracle = deterministic_oracle(spec.clone(), p)?;
        match refute_deterministic(oracle, p)? {
            AdversarialVerdict::RatioWitness { profile, ratio } => {
                println!("{spec}: ratio {ratio:.6} on {:?}", profile.locations())
            }
            AdversarialVerdict::SpViolation(r) => println!(
                "{spec}: agent {} gains {:.6} by reporting {}",
                r.agent, r.gain, r.best_misreport
            ),
        }
    }

    // Any closure works as an oracle.
    let left_third = |x: &facloc::LocationProfile| x.min() + x.span() / 3.0;
    let verdict = refute_deterministic(left_third, p)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&verdict).expect("verdicts serialize")
    );
    Ok(())
}
