//! Cross-module invariants checked on generated inputs.

use facloc::verification::{collapse_to_midpoint, symmetric_sp_margin};
use facloc::{
    best_deviation, optimal_location, ratio, sp_scan, LocationProfile, MechanismSpec, Mixture,
    PNorm, SearchConfig,
};
use proptest::prelude::*;

fn norm() -> impl Strategy<Value = PNorm> {
    prop_oneof![
        (1.0f64..8.0).prop_map(|p| PNorm::finite(p).unwrap()),
        Just(PNorm::INFINITY),
    ]
}

fn profile(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = LocationProfile> {
    prop::collection::vec(-100.0f64..100.0, n).prop_map(|v| LocationProfile::new(v).unwrap())
}

fn spec() -> impl Strategy<Value = MechanismSpec> {
    prop_oneof![
        Just(MechanismSpec::Median),
        Just(MechanismSpec::Lrm),
        Just(MechanismSpec::Dictator(1)),
        (0.0f64..=0.5).prop_map(MechanismSpec::ThreePoint),
        Just(MechanismSpec::Dictator(2).symmetrize()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ratio_is_translation_and_scale_invariant(
        x in profile(2..=2), s in spec(), p in norm(), shift in -50.0f64..50.0, c in 0.1f64..10.0,
    ) {
        prop_assume!(x.span() > 1e-6);
        let base = ratio(&s, &x, p).unwrap().ratio;
        let moved = ratio(&s, &x.shifted(shift).unwrap().scaled(c).unwrap(), p).unwrap().ratio;
        prop_assert!((base - moved).abs() <= 1e-9 * base);
    }

    #[test]
    fn ratio_is_at_least_one(x in profile(2..=9), p in norm()) {
        let r = ratio(&MechanismSpec::Median, &x, p).unwrap().ratio;
        prop_assert!(r >= 1.0 - 1e-12);
    }

    #[test]
    fn optimum_lies_in_the_hull(x in profile(2..=9), p in norm()) {
        let y = optimal_location(&x, p).location;
        prop_assert!(y >= x.min() - 1e-9 && y <= x.max() + 1e-9);
    }

    #[test]
    fn margin_agrees_with_search(q in 0.0f64..=0.5) {
        prop_assume!((q - 0.25).abs() > 1e-3);
        let x = LocationProfile::new(vec![0.0, 1.0]).unwrap();
        let d = MechanismSpec::ThreePoint(q).run(&x, PNorm::TWO).unwrap();
        let margin = symmetric_sp_margin(&d, 1.0).unwrap();
        let s = MechanismSpec::ThreePoint(q);
        let r = best_deviation(&s, &x, PNorm::TWO, 2, &SearchConfig::default()).unwrap();
        prop_assert_eq!(margin >= 0.0, !r.violation);
    }

    #[test]
    fn collapse_preserves_mass_and_symmetry(q in 0.0f64..=0.5, lo in -10.0f64..0.0, hi in 0.1f64..10.0) {
        let x = LocationProfile::new(vec![lo, hi]).unwrap();
        let d = MechanismSpec::ThreePoint(q).run(&x, PNorm::TWO).unwrap();
        let c = collapse_to_midpoint(&d, lo, hi).unwrap();
        let mass: f64 = c.atoms().iter().map(|a| a.1).sum();
        prop_assert!((mass - 1.0).abs() <= 1e-12);
        prop_assert!(facloc::mechanisms::is_midpoint_symmetric(&c, lo, hi));
    }
}

#[test]
fn symmetrizing_a_strategyproof_mechanism_keeps_it_strategyproof() {
    let cfg = SearchConfig::default();
    for inner in [
        MechanismSpec::Dictator(1),
        MechanismSpec::Dictator(2),
        MechanismSpec::Median,
    ] {
        for p in [
            PNorm::ONE,
            PNorm::TWO,
            PNorm::finite(3.0).unwrap(),
            PNorm::INFINITY,
        ] {
            let inner_gain = sp_scan(&inner, p, 2, 100, 5, &cfg).unwrap().gain;
            let sym_gain = sp_scan(&inner.clone().symmetrize(), p, 2, 100, 5, &cfg)
                .unwrap()
                .gain;
            assert!(inner_gain <= 1e-9 && sym_gain <= 1e-9, "{inner} at p = {p}");
        }
    }
}

#[test]
fn mixture_of_strategyproof_parts_is_strategyproof() {
    let m = Mixture::new(vec![0.2, 0.1, 0.0], vec![0.3, 0.2, 0.2], 0.0, None).unwrap();
    let spec = MechanismSpec::Mixture(m);
    let gain = sp_scan(&spec, PNorm::TWO, 3, 100, 9, &SearchConfig::default())
        .unwrap()
        .gain;
    assert!(gain <= 1e-9, "gain {gain}");
}

#[test]
fn mixture_with_optimum_weight_can_be_manipulated() {
    let m = Mixture::new(vec![0.0, 0.0], vec![0.0, 0.0], 1.0, Some(PNorm::TWO)).unwrap();
    let spec = MechanismSpec::Mixture(m);
    let r = sp_scan(&spec, PNorm::TWO, 2, 50, 9, &SearchConfig::default()).unwrap();
    assert!(r.violation);
}
