use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::families::{random_profile, structured_profiles};
use crate::error::{Error, Result};
use crate::format::ser_f64;
use crate::mechanisms::MechanismSpec;
use crate::model::{expected_social_cost, Cost, FacilityDistribution, LocationProfile, PNorm};
use crate::optimizer::optimal_cost;

/// Mechanism cost against the optimum on one profile.
///
/// `ratio` is 1 when both costs are 0 and `+inf` when only the optimum is 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub spec: MechanismSpec,
    pub profile: LocationProfile,
    pub p: PNorm,
    pub mechanism_cost: Cost,
    pub opt_cost: Cost,
    #[serde(serialize_with = "ser_f64")]
    pub ratio: f64,
}

fn ratio_value(mechanism: f64, opt: f64) -> f64 {
    if opt == 0.0 {
        if mechanism == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        mechanism / opt
    }
}

/// `(mechanism_cost, opt_cost, ratio)` of an arbitrary outcome distribution.
pub fn ratio_of_distribution(
    profile: &LocationProfile,
    d: &FacilityDistribution,
    p: PNorm,
) -> (Cost, Cost, f64) {
    let mech = expected_social_cost(profile, d, p);
    let opt = optimal_cost(profile, p);
    (mech, opt, ratio_value(mech.value(), opt.value()))
}

pub fn ratio(spec: &MechanismSpec, profile: &LocationProfile, p: PNorm) -> Result<RatioReport> {
    let d = spec.run(profile, p)?;
    let (mechanism_cost, opt_cost, ratio) = ratio_of_distribution(profile, &d, p);
    Ok(RatioReport {
        spec: spec.clone(),
        profile: profile.clone(),
        p,
        mechanism_cost,
        opt_cost,
        ratio,
    })
}

/// Settings for [`worst_ratio_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSearchConfig {
    pub random_profiles: usize,
    pub hill_climb_iterations: usize,
    pub seed: u64,
}

impl Default for RatioSearchConfig {
    fn default() -> Self {
        RatioSearchConfig {
            random_profiles: 200,
            hill_climb_iterations: 200,
            seed: 42,
        }
    }
}

/// Largest ratio found over the structured families and seeded random
/// profiles, polished by coordinate-wise hill climbing. Profiles whose
/// optimum costs 0 are skipped.
pub fn worst_ratio_search(
    spec: &MechanismSpec,
    p: PNorm,
    n: usize,
    cfg: &RatioSearchConfig,
) -> Result<RatioReport> {
    if n < 2 {
        return Err(Error::InvalidProfile(format!(
            "need at least 2 agents, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<RatioReport> = None;
    let candidates: Vec<LocationProfile> = structured_profiles(n, p)
        .into_iter()
        .chain((0..cfg.random_profiles).map(|_| random_profile(&mut rng, n)))
        .collect();
    for profile in candidates {
        offer(&mut best, ratio(spec, &profile, p)?);
    }
    let Some(mut best) = best else {
        return Err(Error::InvalidProfile(
            "every candidate profile was degenerate".into(),
        ));
    };

    let mut step = 0.1 * best.profile.span().max(f64::MIN_POSITIVE);
    let mut improved_in_sweep = false;
    for it in 0..cfg.hill_climb_iterations {
        let agent = it % n;
        let direction = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        for delta in [direction * step, -direction * step] {
            let mut xs = best.profile.locations().to_vec();
            xs[agent] += delta;
            let candidate = ratio(spec, &LocationProfile::new(xs)?, p)?;
            if candidate.opt_cost.value() > 0.0 && candidate.ratio > best.ratio {
                best = candidate;
                improved_in_sweep = true;
                break;
            }
        }
        if agent == n - 1 {
            if !improved_in_sweep {
                step *= 0.5;
            }
            improved_in_sweep = false;
        }
    }
    Ok(best)
}

fn offer(best: &mut Option<RatioReport>, candidate: RatioReport) {
    if candidate.opt_cost.value() == 0.0 {
        return;
    }
    if best.as_ref().is_none_or(|b| candidate.ratio > b.ratio) {
        *best = Some(candidate);
    }
}
