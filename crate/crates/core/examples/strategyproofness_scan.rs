//! Search for profitable misreports.

use facloc::{best_deviation, sp_scan, LocationProfile, MechanismSpec, PNorm, SearchConfig};

fn main() -> facloc::Result<()> {
    let cfg = SearchConfig::default();
    for (spec, n) in [
        (MechanismSpec::Median, 5),
        (MechanismSpec::Lrm, 2),
        (MechanismSpec::ThreePoint(0.2), 2),
        (MechanismSpec::Optimal(None), 2),
    ] {
        let r = sp_scan(&spec, PNorm::TWO, n, 200, 1, &cfg)?;
        println!(
            "{:<16} n={n} worst gain {:.3e} violation={}",
            spec.to_string(),
            r.gain,
            r.violation
        );
    }

    // The mean invites the right agent to overshoot to the far side.
    let x: LocationProfile = "0, 1".parse()?;
    let r = best_deviation(&MechanismSpec::Optimal(None), &x, PNorm::TWO, 1, &cfg)?;
    println!(
        "agent 1 reports {} instead of 0 and saves {}",
        r.best_misreport, r.gain
    );
    Ok(())
}
