//! Two-agent analysis of shift/scale invariant, symmetric mechanisms.

use serde::Serialize;

use super::deviation::{best_deviation, SearchConfig};
use super::ratio::ratio;
use crate::error::{Error, Result};
use crate::format::ser_f64;
use crate::mechanisms::{midpoint, MechanismSpec};
use crate::model::{FacilityDistribution, LocationProfile, PNorm};

/// Strategyproofness margin of the outcome `d` on the reported profile
/// `(0, x2)`:
///
/// `-sum_{y < x2} P(y) y + x2 P(Y = x2)`
///
/// For a shift/scale invariant symmetric mechanism supported between the
/// reports, a nonnegative margin is equivalent to strategyproofness.
pub fn symmetric_sp_margin(d: &FacilityDistribution, x2: f64) -> Result<f64> {
    if !(x2 > 0.0) || !x2.is_finite() {
        return Err(Error::InvalidProfile(format!("need 0 < x2, got {x2}")));
    }
    check_support(d, 0.0, x2)?;
    let below: f64 = d
        .atoms()
        .iter()
        .filter(|a| a.0 < x2)
        .map(|&(loc, prob)| prob * loc)
        .sum();
    Ok(-below + x2 * d.probability_at(x2))
}

/// Keeps the endpoint masses of `d` and moves all interior mass to the
/// midpoint of `[lo, hi]`.
pub fn collapse_to_midpoint(
    d: &FacilityDistribution,
    lo: f64,
    hi: f64,
) -> Result<FacilityDistribution> {
    check_support(d, lo, hi)?;
    let (at_lo, at_hi) = (d.probability_at(lo), d.probability_at(hi));
    let interior: f64 = d
        .atoms()
        .iter()
        .filter(|a| a.0 != lo && a.0 != hi)
        .map(|a| a.1)
        .sum();
    FacilityDistribution::new([(lo, at_lo), (midpoint(lo, hi), interior), (hi, at_hi)])
}

fn check_support(d: &FacilityDistribution, lo: f64, hi: f64) -> Result<()> {
    match d.atoms().iter().find(|a| a.0 < lo || a.0 > hi) {
        Some(&(location, _)) => Err(Error::UnsupportedSupport {
            location,
            upper: hi,
        }),
        None => Ok(()),
    }
}

/// One row of the three-point frontier, evaluated on the profile `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierRow {
    #[serde(serialize_with = "ser_f64")]
    pub q_end: f64,
    #[serde(serialize_with = "ser_f64")]
    pub margin: f64,
    /// No misreport of either agent gains more than the violation threshold.
    pub strategyproof: bool,
    #[serde(serialize_with = "ser_f64")]
    pub gain: f64,
    #[serde(serialize_with = "ser_f64")]
    pub ratio: f64,
}

/// Sweeps the three-point family over `q_grid`. By scale invariance the
/// unit profile `(0, 1)` decides both strategyproofness and the ratio.
pub fn three_point_frontier(
    p: PNorm,
    q_grid: &[f64],
    cfg: &SearchConfig,
) -> Result<Vec<FrontierRow>> {
    let unit = LocationProfile::new(vec![0.0, 1.0])?;
    q_grid
        .iter()
        .map(|&q| {
            let spec = MechanismSpec::three_point(q)?;
            let d = spec.run(&unit, p)?;
            let margin = symmetric_sp_margin(&d, 1.0)?;
            let mut gain = f64::NEG_INFINITY;
            let mut strategyproof = true;
            for agent in 1..=2 {
                let dev = best_deviation(&spec, &unit, p, agent, cfg)?;
                gain = gain.max(dev.gain);
                strategyproof &= !dev.violation;
            }
            Ok(FrontierRow {
                q_end: q,
                margin,
                strategyproof,
                gain,
                ratio: ratio(&spec, &unit, p)?.ratio,
            })
        })
        .collect()
}
