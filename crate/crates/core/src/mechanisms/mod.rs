//! The mechanism catalog.
//!
//! Every mechanism maps a reported profile to a [`FacilityDistribution`].
//! Randomized mechanisms are returned as their full distribution, never
//! sampled, so all downstream costs are exact expectations.

mod text;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{FacilityDistribution, LocationProfile, PNorm};
use crate::optimizer::optimal_location_sorted;

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Declarative description of a mechanism.
///
/// Agent and rank indices are 1-based. `Optimal(None)` and a mixture with
/// `p: None` optimize the evaluation norm passed to [`run`].
#[derive(Debug, Clone, PartialEq)]
pub enum MechanismSpec {
    /// Lower median: the `ceil(n/2)`-th smallest report.
    Median,
    OrderStatistic(usize),
    Dictator(usize),
    Optimal(Option<PNorm>),
    /// Left-Right-Middle, two agents: 1/4 at each report, 1/2 at the midpoint.
    Lrm,
    Mixture(Mixture),
    /// Two agents: `q` at each report, `1 - 2q` at the midpoint.
    ThreePoint(f64),
    /// Two agents: the inner distribution reflected about the midpoint.
    Mirror(Box<MechanismSpec>),
    /// Two agents: half inner, half its mirror.
    Symmetrized(Box<MechanismSpec>),
}

/// Fixed probabilities on dictators, order statistics and the optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    dictator_weights: Vec<f64>,
    order_weights: Vec<f64>,
    opt_weight: f64,
    p: Option<PNorm>,
}

impl Mixture {
    /// Weights must be nonnegative and sum to 1 within 1e-12. Missing
    /// trailing dictator/rank weights are zero.
    pub fn new(
        dictator_weights: Vec<f64>,
        order_weights: Vec<f64>,
        opt_weight: f64,
        p: Option<PNorm>,
    ) -> Result<Self> {
        let all = dictator_weights
            .iter()
            .chain(&order_weights)
            .chain(std::iter::once(&opt_weight));
        let mut total = 0.0;
        for &w in all {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight(format!("mixture weight {w}")));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidWeight(format!(
                "mixture weights sum to {total}"
            )));
        }
        Ok(Mixture {
            dictator_weights,
            order_weights,
            opt_weight,
            p,
        })
    }

    pub fn dictator_weights(&self) -> &[f64] {
        &self.dictator_weights
    }

    pub fn order_weights(&self) -> &[f64] {
        &self.order_weights
    }

    pub fn opt_weight(&self) -> f64 {
        self.opt_weight
    }

    pub fn p(&self) -> Option<PNorm> {
        self.p
    }
}

impl MechanismSpec {
    pub fn three_point(q_end: f64) -> Result<Self> {
        check_q_end(q_end)?;
        Ok(MechanismSpec::ThreePoint(q_end))
    }

    pub fn mirror(self) -> Self {
        MechanismSpec::Mirror(Box::new(self))
    }

    pub fn symmetrize(self) -> Self {
        MechanismSpec::Symmetrized(Box::new(self))
    }

    /// True for variants defined only on two-agent profiles.
    pub fn is_two_agent_only(&self) -> bool {
        matches!(
            self,
            MechanismSpec::Lrm
                | MechanismSpec::ThreePoint(_)
                | MechanismSpec::Mirror(_)
                | MechanismSpec::Symmetrized(_)
        )
    }

    /// Checks parameters that do not depend on the profile.
    pub fn validate(&self) -> Result<()> {
        match self {
            MechanismSpec::ThreePoint(q) => check_q_end(*q),
            MechanismSpec::Mixture(m) => Mixture::new(
                m.dictator_weights.clone(),
                m.order_weights.clone(),
                m.opt_weight,
                m.p,
            )
            .map(|_| ()),
            MechanismSpec::Mirror(inner) | MechanismSpec::Symmetrized(inner) => inner.validate(),
            _ => Ok(()),
        }
    }

    pub fn run(&self, reported: &LocationProfile, p: PNorm) -> Result<FacilityDistribution> {
        run(self, reported, p)
    }
}

fn check_q_end(q: f64) -> Result<()> {
    if (0.0..=0.5).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!(
            "three-point end mass {q} outside [0, 1/2]"
        )))
    }
}

/// Runs `spec` on `reported` under evaluation norm `p`.
pub fn run(
    spec: &MechanismSpec,
    reported: &LocationProfile,
    p: PNorm,
) -> Result<FacilityDistribution> {
    spec.validate()?;
    let mut atoms = Vec::with_capacity(8);
    emit_atoms(
        spec,
        Reports {
            raw: reported.locations(),
            sorted: reported.sorted(),
        },
        p,
        1.0,
        &mut atoms,
    )?;
    FacilityDistribution::new(atoms)
}

/// Lower median of the profile.
pub fn median(profile: &LocationProfile) -> f64 {
    profile.sorted()[lower_median_index(profile.len())]
}

pub fn lrm(profile: &LocationProfile) -> Result<FacilityDistribution> {
    run(&MechanismSpec::Lrm, profile, PNorm::ONE)
}

pub fn three_point(profile: &LocationProfile, q_end: f64) -> Result<FacilityDistribution> {
    run(&MechanismSpec::three_point(q_end)?, profile, PNorm::ONE)
}

pub fn mirror(inner: MechanismSpec) -> MechanismSpec {
    inner.mirror()
}

pub fn symmetrize(inner: MechanismSpec) -> MechanismSpec {
    inner.symmetrize()
}

/// Reflects `loc` about the midpoint of `[lo, hi]`; endpoints and the
/// midpoint map exactly.
pub fn reflect_about_midpoint(lo: f64, hi: f64, loc: f64) -> f64 {
    if loc == lo {
        hi
    } else if loc == hi {
        lo
    } else {
        (lo + hi) - loc
    }
}

pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    0.5 * (lo + hi)
}

fn lower_median_index(n: usize) -> usize {
    n.div_ceil(2) - 1
}

/// Borrowed reports: agent order and ascending order.
#[derive(Clone, Copy)]
pub(crate) struct Reports<'a> {
    pub raw: &'a [f64],
    pub sorted: &'a [f64],
}

/// Appends the (unmerged) atoms of `spec`, scaled by `weight`, to `out`.
pub(crate) fn emit_atoms(
    spec: &MechanismSpec,
    reports: Reports<'_>,
    p: PNorm,
    weight: f64,
    out: &mut Vec<(f64, f64)>,
) -> Result<()> {
    let n = reports.raw.len();
    if spec.is_two_agent_only() {
        if n != 2 {
            return Err(Error::ArityMismatch {
                mechanism: spec.to_string(),
                expected: 2,
                got: n,
            });
        }
        let (lo, hi) = (reports.sorted[0], reports.sorted[1]);
        if lo == hi {
            out.push((lo, weight));
            return Ok(());
        }
    }
    match spec {
        MechanismSpec::Median => out.push((reports.sorted[lower_median_index(n)], weight)),
        MechanismSpec::OrderStatistic(j) => {
            check_index(*j, n)?;
            out.push((reports.sorted[j - 1], weight));
        }
        MechanismSpec::Dictator(i) => {
            check_index(*i, n)?;
            out.push((reports.raw[i - 1], weight));
        }
        MechanismSpec::Optimal(own) => {
            let loc = optimal_location_sorted(reports.sorted, own.unwrap_or(p)).location;
            out.push((loc, weight));
        }
        MechanismSpec::Lrm => push_three_point(reports.sorted, 0.25, weight, out),
        MechanismSpec::ThreePoint(q) => push_three_point(reports.sorted, *q, weight, out),
        MechanismSpec::Mirror(inner) => {
            let start = out.len();
            emit_atoms(inner, reports, p, weight, out)?;
            let (lo, hi) = (reports.sorted[0], reports.sorted[1]);
            for atom in &mut out[start..] {
                atom.0 = reflect_about_midpoint(lo, hi, atom.0);
            }
        }
        MechanismSpec::Symmetrized(inner) => {
            let start = out.len();
            emit_atoms(inner, reports, p, 0.5 * weight, out)?;
            let end = out.len();
            let (lo, hi) = (reports.sorted[0], reports.sorted[1]);
            for i in start..end {
                let (loc, w) = out[i];
                out.push((reflect_about_midpoint(lo, hi, loc), w));
            }
        }
        MechanismSpec::Mixture(m) => {
            if m.dictator_weights.len() > n {
                return Err(Error::IndexOutOfRange {
                    index: m.dictator_weights.len(),
                    n,
                });
            }
            if m.order_weights.len() > n {
                return Err(Error::IndexOutOfRange {
                    index: m.order_weights.len(),
                    n,
                });
            }
            for (&w, &x) in m.dictator_weights.iter().zip(reports.raw) {
                if w > 0.0 {
                    out.push((x, weight * w));
                }
            }
            for (&w, &x) in m.order_weights.iter().zip(reports.sorted) {
                if w > 0.0 {
                    out.push((x, weight * w));
                }
            }
            if m.opt_weight > 0.0 {
                let loc = optimal_location_sorted(reports.sorted, m.p.unwrap_or(p)).location;
                out.push((loc, weight * m.opt_weight));
            }
        }
    }
    Ok(())
}

fn push_three_point(sorted: &[f64], q: f64, weight: f64, out: &mut Vec<(f64, f64)>) {
    let (lo, hi) = (sorted[0], sorted[1]);
    out.push((lo, weight * q));
    out.push((midpoint(lo, hi), weight * (1.0 - 2.0 * q)));
    out.push((hi, weight * q));
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > n {
        Err(Error::IndexOutOfRange { index, n })
    } else {
        Ok(())
    }
}

impl Serialize for MechanismSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// True when every atom at `m + b` has a partner of equal mass at `m - b`,
/// with `m` the midpoint of `[lo, hi]`.
pub fn is_midpoint_symmetric(d: &FacilityDistribution, lo: f64, hi: f64) -> bool {
    d.atoms()
        .iter()
        .all(|&(loc, w)| d.probability_at(reflect_about_midpoint(lo, hi, loc)) == w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile(xs: &[f64]) -> LocationProfile {
        LocationProfile::new(xs.to_vec()).unwrap()
    }

    fn dist(atoms: &[(f64, f64)]) -> FacilityDistribution {
        FacilityDistribution::new(atoms.iter().copied()).unwrap()
    }

    const UNIT_LRM: [(f64, f64); 3] = [(0.0, 0.25), (0.5, 0.5), (1.0, 0.25)];

    #[test]
    fn medians() {
        assert_eq!(median(&profile(&[1.0, 2.0, 3.0])), 2.0);
        assert_eq!(median(&profile(&[0.0, 1.0])), 0.0);
        assert_eq!(median(&profile(&[0.0, 0.0, 1.0, 1.0])), 0.0);
        let d = run(&MechanismSpec::Median, &profile(&[1.0, 0.0]), PNorm::TWO).unwrap();
        assert_eq!(d, dist(&[(0.0, 1.0)]));
    }

    #[test]
    fn lrm_outputs() {
        assert_eq!(lrm(&profile(&[0.0, 1.0])).unwrap(), dist(&UNIT_LRM));
        assert_eq!(lrm(&profile(&[3.0, 3.0])).unwrap(), dist(&[(3.0, 1.0)]));
        assert_eq!(
            lrm(&profile(&[1.0, -1.0])).unwrap(),
            dist(&[(-1.0, 0.25), (0.0, 0.5), (1.0, 0.25)])
        );
        assert!(matches!(
            lrm(&profile(&[0.0, 1.0, 2.0])),
            Err(Error::ArityMismatch {
                expected: 2,
                got: 3,
                ..
            })
        ));
    }

    #[test]
    fn three_point_outputs() {
        let x = profile(&[0.0, 1.0]);
        assert_eq!(three_point(&x, 0.25).unwrap(), lrm(&x).unwrap());
        assert_eq!(
            three_point(&x, 0.5).unwrap(),
            dist(&[(0.0, 0.5), (1.0, 0.5)])
        );
        let d = three_point(&x, 0.2).unwrap();
        assert_eq!(d.probability_at(0.0), 0.2);
        assert!((d.probability_at(0.5) - 0.6).abs() < 1e-15);
        assert_eq!(d.probability_at(1.0), 0.2);
        assert!(matches!(three_point(&x, 0.6), Err(Error::InvalidWeight(_))));
        assert!(matches!(
            three_point(&x, -0.1),
            Err(Error::InvalidWeight(_))
        ));
        assert!(three_point(&profile(&[0.0, 1.0, 2.0]), 0.2).is_err());
    }

    #[test]
    fn mirror_and_symmetrize() {
        let x = profile(&[0.0, 1.0]);
        let dict = MechanismSpec::Dictator(1);
        assert_eq!(
            mirror(dict.clone()).run(&x, PNorm::TWO).unwrap(),
            dist(&[(1.0, 1.0)])
        );
        assert_eq!(
            symmetrize(dict).run(&x, PNorm::TWO).unwrap(),
            dist(&[(0.0, 0.5), (1.0, 0.5)])
        );
        for xs in [[0.0, 1.0], [-3.0, 7.5], [2.0, 2.0]] {
            let y = profile(&xs);
            assert_eq!(
                mirror(MechanismSpec::Lrm).run(&y, PNorm::TWO).unwrap(),
                lrm(&y).unwrap()
            );
        }
        assert!(mirror(MechanismSpec::Median)
            .run(&profile(&[0.0, 1.0, 2.0]), PNorm::TWO)
            .is_err());
    }

    #[test]
    fn mixture_with_full_opt_weight_is_the_optimum() {
        let m = Mixture::new(vec![], vec![], 1.0, None).unwrap();
        let d = run(
            &MechanismSpec::Mixture(m),
            &profile(&[0.0, 1.0]),
            PNorm::TWO,
        )
        .unwrap();
        assert_eq!(d, dist(&[(0.5, 1.0)]));
    }

    #[test]
    fn mixture_validation() {
        assert!(Mixture::new(vec![0.5], vec![0.4], 0.0, None).is_err());
        assert!(Mixture::new(vec![-0.5, 1.5], vec![], 0.0, None).is_err());
        assert!(Mixture::new(vec![0.5], vec![0.25], 0.25, None).is_ok());
        let m = Mixture::new(vec![0.0, 0.0, 1.0], vec![], 0.0, None).unwrap();
        assert!(matches!(
            run(
                &MechanismSpec::Mixture(m),
                &profile(&[0.0, 1.0]),
                PNorm::TWO
            ),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn index_errors() {
        let x = profile(&[0.0, 1.0]);
        assert!(run(&MechanismSpec::Dictator(3), &x, PNorm::TWO).is_err());
        assert!(run(&MechanismSpec::OrderStatistic(0), &x, PNorm::TWO).is_err());
    }

    #[test]
    fn mixture_mass_merges() {
        // dictator 1 and rank 1 coincide on this profile: the masses add up
        let m = Mixture::new(vec![0.3], vec![0.2, 0.0, 0.1], 0.4, None).unwrap();
        let d = run(
            &MechanismSpec::Mixture(m),
            &profile(&[0.0, 2.0, 1.0]),
            PNorm::TWO,
        )
        .unwrap();
        assert_eq!(d.len(), 3);
        assert!((d.probability_at(0.0) - 0.5).abs() < 1e-15);
        assert!((d.probability_at(1.0) - 0.4).abs() < 1e-15);
        assert!((d.probability_at(2.0) - 0.1).abs() < 1e-15);
    }

    fn small_profile() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-100i32..100, 2..10)
            .prop_map(|v| v.into_iter().map(|i| i as f64 / 8.0).collect())
    }

    proptest! {
        #[test]
        fn outputs_are_valid_distributions(xs in small_profile(), j in 1usize..10, q in 0.0f64..=0.5) {
            let x = profile(&xs);
            let n = xs.len();
            let mut specs = vec![
                MechanismSpec::Median,
                MechanismSpec::OrderStatistic(j.min(n)),
                MechanismSpec::Dictator(j.min(n)),
                MechanismSpec::Optimal(None),
                MechanismSpec::Optimal(Some(PNorm::finite(3.0).unwrap())),
            ];
            if n == 2 {
                specs.push(MechanismSpec::Lrm);
                specs.push(MechanismSpec::ThreePoint(q));
                specs.push(MechanismSpec::Dictator(2).symmetrize());
            }
            for spec in specs {
                let d = run(&spec, &x, PNorm::TWO).unwrap();
                let mass: f64 = d.atoms().iter().map(|a| a.1).sum();
                prop_assert!((mass - 1.0).abs() < 1e-12);
                prop_assert!(d.atoms().windows(2).all(|w| w[0].0 < w[1].0));
            }
        }

        #[test]
        fn median_is_the_middle_order_statistic(xs in small_profile()) {
            let x = profile(&xs);
            let k = xs.len().div_ceil(2);
            prop_assert_eq!(
                run(&MechanismSpec::Median, &x, PNorm::TWO).unwrap(),
                run(&MechanismSpec::OrderStatistic(k), &x, PNorm::TWO).unwrap()
            );
        }

        #[test]
        fn lrm_is_shift_and_scale_invariant(a in -64i32..64, b in -64i32..64, shift in -32i32..32, k in -6i32..6) {
            let x = profile(&[a as f64, b as f64]);
            let base = lrm(&x).unwrap();
            let c = shift as f64;
            prop_assert_eq!(
                lrm(&x.shifted(c).unwrap()).unwrap(),
                base.map_locations(|l| l + c).unwrap()
            );
            for s in [2f64.powi(k), -(2f64.powi(k))] {
                prop_assert_eq!(
                    lrm(&x.scaled(s).unwrap()).unwrap(),
                    base.map_locations(|l| l * s).unwrap()
                );
            }
        }

        #[test]
        fn symmetrized_outputs_are_symmetric(a in -50.0f64..50.0, b in -50.0f64..50.0, q in 0.0f64..=0.5) {
            let x = profile(&[a, b]);
            let (lo, hi) = (x.min(), x.max());
            for inner in [
                MechanismSpec::Dictator(1),
                MechanismSpec::Dictator(2),
                MechanismSpec::Median,
                MechanismSpec::ThreePoint(q),
            ] {
                let d = inner.symmetrize().run(&x, PNorm::TWO).unwrap();
                prop_assert!(is_midpoint_symmetric(&d, lo, hi));
            }
        }

        #[test]
        fn degenerate_mixtures_match_pure_mechanisms(xs in small_profile(), pick in 0usize..10) {
            let x = profile(&xs);
            let n = xs.len();
            let i = pick % n;
            let mut one_hot = vec![0.0; n];
            one_hot[i] = 1.0;
            let dict = Mixture::new(one_hot.clone(), vec![], 0.0, None).unwrap();
            prop_assert_eq!(
                run(&MechanismSpec::Mixture(dict), &x, PNorm::TWO).unwrap(),
                run(&MechanismSpec::Dictator(i + 1), &x, PNorm::TWO).unwrap()
            );
            let rank = Mixture::new(vec![], one_hot, 0.0, None).unwrap();
            prop_assert_eq!(
                run(&MechanismSpec::Mixture(rank), &x, PNorm::TWO).unwrap(),
                run(&MechanismSpec::OrderStatistic(i + 1), &x, PNorm::TWO).unwrap()
            );
            let p3 = PNorm::finite(3.0).unwrap();
            let opt = Mixture::new(vec![], vec![], 1.0, None).unwrap();
            prop_assert_eq!(
                run(&MechanismSpec::Mixture(opt), &x, p3).unwrap(),
                run(&MechanismSpec::Optimal(None), &x, p3).unwrap()
            );
        }
    }
}
