//! Numerical certificate for the randomized mixture lower bound.
//!
//! For `n = 2k` agents and integer `p >= 3`, each rank `j` gets an
//! adversarial profile whose optimum sits exactly at 0. Strategyproofness on
//! those profiles caps the mass a mixture can put on the optimum at
//! `1 / (1 + sum_j 1/a_j)`, and the half-half profile turns that cap into a
//! ratio lower bound that approaches `2^(1-1/p)` as `k` grows.

use std::fmt::Write as _;

use serde::Serialize;

use super::families::adversarial_clusters;
use crate::error::{Error, Result};
use crate::format::{ser_f64, ser_f64_vec, sig17};
use crate::model::PNorm;
use crate::optimizer::{optimal_location_clustered, RootQuery, RootSearch, LOCATION_TOLERANCE};

pub const MIN_P: u32 = 3;
/// Past this exponent the balance function is too ill-conditioned in
/// double precision; the certificate refuses instead of degrading.
pub const MAX_P: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateTolerances {
    /// Relative bisection tolerance of the root finder.
    #[serde(serialize_with = "ser_f64")]
    pub root_tol: f64,
    /// Relative width of the optimum bisection.
    #[serde(serialize_with = "ser_f64")]
    pub location_tol: f64,
    /// Allowed `|OPT(x^j)| / (1 + a_j)`.
    #[serde(serialize_with = "ser_f64")]
    pub opt_residual: f64,
    pub max_root_retries: u32,
}

impl Default for CertificateTolerances {
    fn default() -> Self {
        CertificateTolerances {
            root_tol: 1e-12,
            location_tol: LOCATION_TOLERANCE,
            opt_residual: 1e-6,
            max_root_retries: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureLowerBound {
    pub p: u32,
    pub k: usize,
    /// `a_1, ..., a_k`.
    #[serde(serialize_with = "ser_f64_vec")]
    pub roots: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub inverse_sum: f64,
    /// Ceiling on the probability of the optimum.
    #[serde(serialize_with = "ser_f64")]
    pub p_opt_bound: f64,
    #[serde(serialize_with = "ser_f64")]
    pub ratio_lower_bound: f64,
    /// `|OPT(x^j)|` per rank.
    #[serde(serialize_with = "ser_f64_vec")]
    pub opt_residuals: Vec<f64>,
    /// `a_j < 2^(p-1) (j-1)` for ranks `j >= k^(1/(p-1)) + 1`; `None` below.
    pub bound_checks: Vec<Option<bool>>,
    pub tolerances: CertificateTolerances,
}

impl MixtureLowerBound {
    pub fn compute(p: u32, k: usize) -> Result<Self> {
        Self::compute_with(p, k, CertificateTolerances::default())
    }

    pub fn compute_with(p: u32, k: usize, tolerances: CertificateTolerances) -> Result<Self> {
        if !(MIN_P..=MAX_P).contains(&p) {
            return Err(Error::InvalidQuery(format!(
                "p = {p} outside the supported range [{MIN_P}, {MAX_P}]"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidQuery("k must be at least 1".into()));
        }
        let search = RootSearch {
            tol: tolerances.root_tol,
            max_retries: tolerances.max_root_retries,
        };
        let norm = PNorm::finite(p as f64)?;
        let threshold = (k as f64).powf(1.0 / (p as f64 - 1.0)) + 1.0;
        let cap = 2f64.powi(p as i32 - 1);

        let mut roots = Vec::with_capacity(k);
        let mut opt_residuals = Vec::with_capacity(k);
        let mut bound_checks = Vec::with_capacity(k);
        for j in 1..=k {
            let a = RootQuery::new(j, k, p)?.solve(search)?;
            let location =
                optimal_location_clustered(&adversarial_clusters(j, k, a), norm)?.location;
            let tolerance = tolerances.opt_residual * (1.0 + a);
            if !(location.abs() <= tolerance) {
                return Err(Error::OptMismatch {
                    j,
                    location,
                    tolerance,
                });
            }
            roots.push(a);
            opt_residuals.push(location.abs());
            bound_checks.push((j as f64 >= threshold).then(|| a < cap * (j - 1) as f64));
        }

        let inverse_sum: f64 = roots.iter().map(|a| 1.0 / a).sum();
        let p_opt_bound = 1.0 / (1.0 + inverse_sum);
        let median_ratio = norm.median_ratio_bound();
        Ok(MixtureLowerBound {
            p,
            k,
            roots,
            inverse_sum,
            p_opt_bound,
            ratio_lower_bound: median_ratio - (median_ratio - 1.0) * p_opt_bound,
            opt_residuals,
            bound_checks,
            tolerances,
        })
    }

    /// True when every applicable bound check holds.
    pub fn bound_checks_hold(&self) -> bool {
        self.bound_checks.iter().all(|c| c.unwrap_or(true))
    }

    /// CSV with columns `j,a_j,1/a_j,bound_check`; the check column is empty
    /// where it does not apply.
    pub fn root_table_csv(&self) -> String {
        let mut out = String::from("j,a_j,1/a_j,bound_check\n");
        for (i, (&a, check)) in self.roots.iter().zip(&self.bound_checks).enumerate() {
            let check = check.map_or(String::new(), |c| c.to_string());
            let _ = writeln!(out, "{},{},{},{}", i + 1, sig17(a), sig17(1.0 / a), check);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_form(j: usize, k: usize) -> f64 {
        let j1 = (j - 1) as f64;
        j1 + (j1 * j1 + k as f64).sqrt()
    }

    #[test]
    fn smallest_cubic_case_by_hand() {
        let c = MixtureLowerBound::compute(3, 2).unwrap();
        assert!((c.roots[0] - 2f64.sqrt()).abs() < 1e-11);
        assert!((c.roots[1] - (1.0 + 3f64.sqrt())).abs() < 1e-11);
        assert!((c.inverse_sum - 1.0731322).abs() < 1e-6);
        assert!((c.p_opt_bound - 0.4823626).abs() < 1e-6);
        assert!((c.ratio_lower_bound - 1.3040615).abs() < 1e-6);
        assert!(c.p_opt_bound > 0.0 && c.p_opt_bound < 1.0);
        assert!(c.ratio_lower_bound < 2f64.powf(2.0 / 3.0));
    }

    #[test]
    fn cubic_roots_follow_the_closed_form() {
        let k = 40;
        let c = MixtureLowerBound::compute(3, k).unwrap();
        for (i, &a) in c.roots.iter().enumerate() {
            let want = closed_form(i + 1, k);
            assert!((a - want).abs() <= 1e-9 * want);
        }
        assert!(c.bound_checks_hold());
    }

    #[test]
    fn bounds_move_monotonically_in_k() {
        let ks = [2usize, 5, 10, 30];
        let certs: Vec<_> = ks
            .iter()
            .map(|&k| MixtureLowerBound::compute(4, k).unwrap())
            .collect();
        for w in certs.windows(2) {
            assert!(w[1].p_opt_bound < w[0].p_opt_bound);
            assert!(w[1].ratio_lower_bound > w[0].ratio_lower_bound);
        }
    }

    #[test]
    fn quartic_first_root_is_a_cube_root() {
        // rank 1: a^3 - k = 0
        let c = MixtureLowerBound::compute(4, 2).unwrap();
        assert!((c.roots[0] - 2f64.cbrt()).abs() < 1e-9);
        let c = MixtureLowerBound::compute(4, 3).unwrap();
        assert!((c.roots[0] - 3f64.cbrt()).abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(MixtureLowerBound::compute(2, 3).is_err());
        assert!(MixtureLowerBound::compute(17, 3).is_err());
        assert!(MixtureLowerBound::compute(3, 0).is_err());
    }

    #[test]
    fn residual_failures_surface_as_opt_mismatch() {
        let tol = CertificateTolerances {
            opt_residual: -1.0,
            ..CertificateTolerances::default()
        };
        assert!(matches!(
            MixtureLowerBound::compute_with(3, 2, tol),
            Err(Error::OptMismatch { j: 1, .. })
        ));
    }

    #[test]
    fn root_table_layout() {
        let c = MixtureLowerBound::compute(3, 2).unwrap();
        let csv = c.root_table_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "j,a_j,1/a_j,bound_check");
        assert_eq!(lines.len(), 3);
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first[0], "1");
        let a: f64 = first[1].parse().unwrap();
        assert!((a - 2f64.sqrt()).abs() < 1e-11);
        assert_eq!(first[1].len(), "1.4142135623724368".len());
        // threshold sqrt(2) + 1: only j = 3 and up are checked
        assert!(lines[1].ends_with(','));
        assert!(lines[2].ends_with(','));
    }
}
