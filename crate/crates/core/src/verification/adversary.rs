//! Constructive refutation of deterministic two-agent mechanisms.
//!
//! Any deterministic mechanism either puts the facility outside the open
//! interval between two reports somewhere (which costs the median bound
//! `2^(1-1/p)` on that profile) or can be manipulated.

use serde::Serialize;

use super::deviation::DeviationReport;
use super::ratio::ratio_of_distribution;
use crate::error::{Error, Result};
use crate::format::ser_f64;
use crate::mechanisms::MechanismSpec;
use crate::model::{FacilityDistribution, LocationProfile, PNorm};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AdversarialVerdict {
    RatioWitness {
        profile: LocationProfile,
        #[serde(serialize_with = "ser_f64")]
        ratio: f64,
    },
    SpViolation(DeviationReport),
}

/// Two queries decide the verdict:
///
/// 1. `y = f(0, 1)`; if `y` is not strictly between the reports, `(0, 1)`
///    is a ratio witness.
/// 2. `y' = f(0, y)`; if `y'` is not strictly inside `(0, y)`, `(0, y)` is
///    a ratio witness.
/// 3. Otherwise the agent at `y` gains `|y - y'|` by reporting 1.
pub fn refute_deterministic<F>(oracle: F, p: PNorm) -> Result<AdversarialVerdict>
where
    F: Fn(&LocationProfile) -> f64,
{
    match p.exponent() {
        Some(e) if e > 1.0 => {}
        _ => {
            return Err(Error::InvalidNorm(format!(
                "{p}: the deterministic adversary needs 1 < p < inf"
            )))
        }
    }
    let unit = LocationProfile::new(vec![0.0, 1.0])?;
    let y = oracle(&unit);
    if !(y > 0.0 && y < 1.0) {
        return witness(unit, y, p);
    }
    let inner = LocationProfile::new(vec![0.0, y])?;
    let y_inner = oracle(&inner);
    if !(y_inner > 0.0 && y_inner < y) {
        return witness(inner, y_inner, p);
    }
    // agent 2 truly at y reports 1 and moves the facility onto itself
    let deviated = (y - oracle(&unit)).abs();
    let truthful = (y - y_inner).abs();
    let threshold = 1e-7 * (1.0 + inner.span());
    Ok(AdversarialVerdict::SpViolation(DeviationReport::new(
        2, inner, 1.0, truthful, deviated, threshold,
    )))
}

fn witness(profile: LocationProfile, y: f64, p: PNorm) -> Result<AdversarialVerdict> {
    let d = FacilityDistribution::point(y)?;
    let (_, _, ratio) = ratio_of_distribution(&profile, &d, p);
    Ok(AdversarialVerdict::RatioWitness { profile, ratio })
}

/// Wraps a deterministic catalog mechanism as an oracle.
pub fn deterministic_oracle(
    spec: MechanismSpec,
    p: PNorm,
) -> Result<impl Fn(&LocationProfile) -> f64> {
    match spec {
        MechanismSpec::Median
        | MechanismSpec::OrderStatistic(_)
        | MechanismSpec::Dictator(_)
        | MechanismSpec::Optimal(_) => {}
        other => {
            return Err(Error::InvalidQuery(format!(
                "`{other}` is not a deterministic mechanism"
            )))
        }
    }
    Ok(move |x: &LocationProfile| {
        spec.run(x, p)
            .ok()
            .and_then(|d| d.as_point())
            .unwrap_or(f64::NAN)
    })
}
