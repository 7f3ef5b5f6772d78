use std::fmt;

use serde::{Serialize, Serializer};

use super::{FacilityDistribution, LocationProfile, PNorm};
use crate::format::Sig17;

/// A nonnegative cost, in the same units as locations.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Cost(f64);

impl Cost {
    pub const ZERO: Cost = Cost(0.0);

    pub fn new(amount: f64) -> Self {
        debug_assert!(amount >= 0.0 || amount.is_nan(), "negative cost {amount}");
        Cost(amount)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<Cost> for f64 {
    fn from(c: Cost) -> f64 {
        c.0
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Sig17(self.0).serialize(serializer)
    }
}

/// Distance from an agent at `x` to a facility at `y`.
pub fn agent_cost(x: f64, y: f64) -> Cost {
    Cost((x - y).abs())
}

/// Expected distance from `x` to a facility drawn from `d`.
pub fn expected_agent_cost(x: f64, d: &FacilityDistribution) -> Cost {
    Cost(
        d.atoms()
            .iter()
            .map(|&(loc, prob)| prob * (x - loc).abs())
            .sum(),
    )
}

/// L_p norm of the agents' distances to `y`.
pub fn social_cost(profile: &LocationProfile, y: f64, p: PNorm) -> Cost {
    Cost(lp_cost_of_points(
        profile.sorted().iter().map(|&x| (x, 1.0)),
        y,
        p,
    ))
}

/// Expectation over `d` of the L_p social cost (not the norm of expected distances).
pub fn expected_social_cost(profile: &LocationProfile, d: &FacilityDistribution, p: PNorm) -> Cost {
    Cost(
        d.atoms()
            .iter()
            .map(|&(loc, prob)| prob * social_cost(profile, loc, p).0)
            .sum(),
    )
}

/// `sum_i w_i (|x_i - y| / scale)^p`, with `scale` the largest distance.
///
/// Returns `(sum, scale)`; the true sum of powers is `sum * scale^p`.
/// Factoring out the largest distance keeps large exponents from overflowing.
pub(crate) fn sum_powers_scaled<I>(points: I, y: f64, p: f64) -> (f64, f64)
where
    I: Iterator<Item = (f64, f64)> + Clone,
{
    let scale = points
        .clone()
        .filter(|&(_, w)| w > 0.0)
        .map(|(x, _)| (x - y).abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return (0.0, 0.0);
    }
    let sum = points
        .map(|(x, w)| w * ((x - y).abs() / scale).powf(p))
        .sum();
    (sum, scale)
}

/// L_p cost of weighted points `(location, weight)` at `y`.
pub(crate) fn lp_cost_of_points<I>(points: I, y: f64, p: PNorm) -> f64
where
    I: Iterator<Item = (f64, f64)> + Clone,
{
    match p.exponent() {
        None => points
            .filter(|&(_, w)| w > 0.0)
            .map(|(x, _)| (x - y).abs())
            .fold(0.0, f64::max),
        Some(1.0) => points.map(|(x, w)| w * (x - y).abs()).sum(),
        Some(e) => {
            let (sum, scale) = sum_powers_scaled(points, y, e);
            if scale == 0.0 {
                0.0
            } else {
                scale * sum.powf(1.0 / e)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile(xs: &[f64]) -> LocationProfile {
        LocationProfile::new(xs.to_vec()).unwrap()
    }

    fn p(v: f64) -> PNorm {
        PNorm::finite(v).unwrap()
    }

    fn lrm_unit() -> FacilityDistribution {
        FacilityDistribution::new([(0.0, 0.25), (0.5, 0.5), (1.0, 0.25)]).unwrap()
    }

    #[test]
    fn agent_costs() {
        assert_eq!(agent_cost(0.0, 1.0).value(), 1.0);
        assert_eq!(agent_cost(3.0, 3.0).value(), 0.0);
        assert_eq!(agent_cost(-2.0, 5.0).value(), 7.0);
    }

    #[test]
    fn expected_agent_costs() {
        assert!((expected_agent_cost(1.0, &lrm_unit()).value() - 0.5).abs() < 1e-15);
        let point = FacilityDistribution::point(0.0).unwrap();
        assert_eq!(expected_agent_cost(0.0, &point).value(), 0.0);
        let d = FacilityDistribution::new([(0.0, 0.2), (0.75, 0.6), (1.5, 0.2)]).unwrap();
        assert!((expected_agent_cost(1.0, &d).value() - 0.45).abs() < 1e-15);
    }

    #[test]
    fn social_costs() {
        let x = profile(&[0.0, 1.0]);
        assert!((social_cost(&x, 0.5, PNorm::TWO).value() - 0.5f64.sqrt()).abs() < 1e-15);
        for e in [1.0, 1.5, 2.0, 3.0, 17.0] {
            assert_eq!(social_cost(&x, 0.0, p(e)).value(), 1.0);
        }
        let half = profile(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let expected = 6f64.powf(1.0 / 3.0) / 2.0;
        assert!((social_cost(&half, 0.5, p(3.0)).value() - expected).abs() < 1e-14);
        assert_eq!(
            social_cost(&profile(&[-1.0, 3.0]), 0.0, PNorm::INFINITY).value(),
            3.0
        );
    }

    #[test]
    fn expected_social_costs() {
        let x = profile(&[0.0, 1.0]);
        let expected = 0.25 + 0.5 * 0.5f64.sqrt() + 0.25;
        assert!(
            (expected_social_cost(&x, &lrm_unit(), PNorm::TWO).value() - expected).abs() < 1e-15
        );
        let halves = FacilityDistribution::new([(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(
            expected_social_cost(&x, &halves, PNorm::INFINITY).value(),
            1.0
        );
    }

    #[test]
    fn large_exponent_does_not_overflow() {
        let x = profile(&[0.0, 1e30]);
        let c = social_cost(&x, 0.0, p(400.0)).value();
        assert!((c - 1e30).abs() / 1e30 < 1e-12);
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    fn norms() -> impl Strategy<Value = PNorm> {
        prop_oneof![
            (1.0f64..12.0).prop_map(|e| PNorm::finite(e).unwrap()),
            Just(PNorm::ONE),
            Just(PNorm::TWO),
            Just(PNorm::INFINITY),
        ]
    }

    proptest! {
        #[test]
        fn shift_invariance(
            xs in proptest::collection::vec(-10.0f64..10.0, 2..9),
            y in -10.0f64..10.0,
            c in -100.0f64..100.0,
            p in norms(),
        ) {
            let x = profile(&xs);
            let base = social_cost(&x, y, p).value();
            let moved = social_cost(&x.shifted(c).unwrap(), y + c, p).value();
            // shifting rounds each coordinate once, so compare at the scale of |c|
            let slack = 1e-12 * (base + c.abs() * xs.len() as f64);
            prop_assert!((base - moved).abs() <= slack.max(1e-12 * base));
        }

        #[test]
        fn scale_homogeneity(
            xs in proptest::collection::vec(-10.0f64..10.0, 2..9),
            y in -10.0f64..10.0,
            k in -10i32..10,
            p in norms(),
        ) {
            // power-of-two scalings are exact in binary floating point
            let c = 2f64.powi(k) * if k % 2 == 0 { 1.0 } else { -1.0 };
            let x = profile(&xs);
            let base = social_cost(&x, y, p).value();
            let scaled = social_cost(&x.scaled(c).unwrap(), c * y, p).value();
            prop_assert!(rel_close(scaled, c.abs() * base, 1e-12));
        }

        #[test]
        fn point_mass_matches_deterministic_cost(
            xs in proptest::collection::vec(-10.0f64..10.0, 2..9),
            y in -10.0f64..10.0,
            p in norms(),
        ) {
            let x = profile(&xs);
            let d = FacilityDistribution::point(y).unwrap();
            prop_assert_eq!(expected_social_cost(&x, &d, p), social_cost(&x, y, p));
        }
    }
}
