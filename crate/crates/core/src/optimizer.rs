//! Optimal facility locations and the root finding behind the adversarial
//! mixture profiles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::ser_f64;
use crate::model::{lp_cost_of_points, sum_powers_scaled, Cost, LocationProfile, PNorm};

/// Relative width at which the derivative bisection stops.
pub const LOCATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OptMethod {
    ClosedFormMedian,
    ClosedFormMean,
    ClosedFormMidrange,
    DerivativeBisection,
}

/// A minimizer of the social cost and its value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptResult {
    #[serde(serialize_with = "ser_f64")]
    pub location: f64,
    pub cost: Cost,
    pub method: OptMethod,
}

/// Minimizer of `y -> sc(profile, y)`.
///
/// For `p = 1` every point of the median interval is optimal; the left
/// endpoint (the lower median) is returned so OPT agrees with the median
/// mechanism.
pub fn optimal_location(profile: &LocationProfile, p: PNorm) -> OptResult {
    optimal_location_sorted(profile.sorted(), p)
}

pub fn optimal_cost(profile: &LocationProfile, p: PNorm) -> Cost {
    optimal_location(profile, p).cost
}

/// Same as [`optimal_location`] for a profile given as `(location, count)`
/// clusters in ascending location order. Used for profiles with many
/// coincident agents.
pub fn optimal_location_clustered(clusters: &[(f64, usize)], p: PNorm) -> Result<OptResult> {
    let total: usize = clusters.iter().map(|c| c.1).sum();
    if total < 2 {
        return Err(Error::InvalidProfile(format!(
            "need at least 2 agents, got {total}"
        )));
    }
    if clusters.windows(2).any(|w| w[0].0 > w[1].0) || clusters.iter().any(|c| !c.0.is_finite()) {
        return Err(Error::InvalidProfile(
            "clusters must be finite and ascending".into(),
        ));
    }
    let points: Vec<(f64, f64)> = clusters
        .iter()
        .filter(|c| c.1 > 0)
        .map(|&(x, m)| (x, m as f64))
        .collect();
    Ok(solve(&points, p))
}

pub(crate) fn optimal_location_sorted(sorted: &[f64], p: PNorm) -> OptResult {
    solve(&UnitWeights(sorted), p)
}

/// Ascending points with weights, as the solver sees them.
trait WeightedPoints {
    fn iter(&self) -> impl Iterator<Item = (f64, f64)> + Clone + '_;
    fn min(&self) -> f64;
    fn max(&self) -> f64;
}

struct UnitWeights<'a>(&'a [f64]);

impl WeightedPoints for UnitWeights<'_> {
    fn iter(&self) -> impl Iterator<Item = (f64, f64)> + Clone + '_ {
        self.0.iter().map(|&x| (x, 1.0))
    }
    fn min(&self) -> f64 {
        self.0[0]
    }
    fn max(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

impl WeightedPoints for Vec<(f64, f64)> {
    fn iter(&self) -> impl Iterator<Item = (f64, f64)> + Clone + '_ {
        self.as_slice().iter().copied()
    }
    fn min(&self) -> f64 {
        self[0].0
    }
    fn max(&self) -> f64 {
        self[self.len() - 1].0
    }
}

fn solve<P: WeightedPoints>(points: &P, p: PNorm) -> OptResult {
    let (location, method) = match p.exponent() {
        None => (
            0.5 * (points.min() + points.max()),
            OptMethod::ClosedFormMidrange,
        ),
        Some(1.0) => (lower_median(points), OptMethod::ClosedFormMedian),
        Some(2.0) => {
            let (sum, weight) = points
                .iter()
                .fold((0.0, 0.0), |(s, w), (x, m)| (s + m * x, w + m));
            // clamp against rounding so the location stays inside the hull
            let mean = (sum / weight).clamp(points.min(), points.max());
            (mean, OptMethod::ClosedFormMean)
        }
        Some(e) => (bisect_derivative(points, e), OptMethod::DerivativeBisection),
    };
    OptResult {
        location,
        cost: Cost::new(lp_cost_of_points(points.iter(), location, p)),
        method,
    }
}

fn lower_median<P: WeightedPoints>(points: &P) -> f64 {
    let total: f64 = points.iter().map(|(_, m)| m).sum();
    let rank = (total / 2.0).ceil();
    let mut seen = 0.0;
    for (x, m) in points.iter() {
        seen += m;
        if seen >= rank {
            return x;
        }
    }
    points.max()
}

/// Sign-preserving rescaling of `sum_i w_i sign(y - x_i) |y - x_i|^(p-1)`.
fn scaled_derivative<P: WeightedPoints>(points: &P, y: f64, p: f64) -> f64 {
    let (_, scale) = sum_powers_scaled(points.iter(), y, 1.0);
    if scale == 0.0 {
        return 0.0;
    }
    points
        .iter()
        .map(|(x, w)| {
            let d = y - x;
            w * d.signum() * (d.abs() / scale).powf(p - 1.0)
        })
        .sum()
}

/// Bisection on the nondecreasing derivative over `[min, max]`.
///
/// Invariant: derivative(lo) <= 0 <= derivative(hi).
fn bisect_derivative<P: WeightedPoints>(points: &P, p: f64) -> f64 {
    let (mut lo, mut hi) = (points.min(), points.max());
    let width = LOCATION_TOLERANCE * (1.0 + (hi - lo));
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let slope = scaled_derivative(points, mid, p);
        if slope == 0.0 {
            return mid;
        } else if slope < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Leftmost sign change of `f` on `(0, max_bound]`.
///
/// Scans in steps of `scan_step`, then bisects the first bracket until its
/// width is at most `tol * (1 + |root|)`. Requires `f(0) < 0`.
pub fn smallest_positive_root<F>(f: F, scan_step: f64, max_bound: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(scan_step > 0.0) || !(max_bound > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidQuery(format!(
            "scan_step {scan_step}, max_bound {max_bound} and tol {tol} must be positive"
        )));
    }
    let f0 = f(0.0);
    if !(f0 < 0.0) {
        return Err(Error::InvalidQuery(format!("f(0) = {f0} is not negative")));
    }
    let steps = (max_bound / scan_step).ceil() as u64;
    let mut lo = 0.0;
    for i in 1..=steps {
        let x = (i as f64 * scan_step).min(max_bound);
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            return Ok(bisect_sign_change(&f, lo, x, tol));
        }
        lo = x;
    }
    Err(Error::NoRootFound { max_bound })
}

// f(lo) < 0 < f(hi)
fn bisect_sign_change<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * (1.0 + mid.abs()) || mid <= lo || mid >= hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        } else if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Parameters of one adversarial profile in the mixture lower bound:
/// `n = 2 * half` agents, rank `rank`, integer exponent `p >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootQuery {
    rank: usize,
    half: usize,
    p: u32,
}

/// Retry policy for [`RootQuery::solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    pub tol: f64,
    pub max_retries: u32,
}

impl Default for RootSearch {
    fn default() -> Self {
        RootSearch {
            tol: 1e-12,
            max_retries: 16,
        }
    }
}

impl RootQuery {
    /// `rank` may run up to `2 * half`; ranks above `half` mirror onto
    /// `2 * half + 1 - rank`.
    pub fn new(rank: usize, half: usize, p: u32) -> Result<Self> {
        if half == 0 || rank == 0 || rank > 2 * half {
            return Err(Error::InvalidQuery(format!(
                "rank {rank} must lie in [1, {}] with half >= 1",
                2 * half
            )));
        }
        if p < 3 {
            return Err(Error::InvalidQuery(format!(
                "p = {p} must be an integer >= 3"
            )));
        }
        Ok(RootQuery { rank, half, p })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn effective_rank(&self) -> usize {
        if self.rank > self.half {
            2 * self.half - self.rank + 1
        } else {
            self.rank
        }
    }

    /// `j a^(p-1) - (k - j + 1) - (j - 1)(1 + a)^(p-1)` at `a = alpha`.
    ///
    /// Its root puts a zero of the social cost derivative at the origin of
    /// the adversarial profile.
    pub fn balance(&self, alpha: f64) -> f64 {
        balance(self.effective_rank(), self.half, self.p, alpha)
    }

    /// Linear scan step: `max(1e-3, k^(1/(p-1)) / 1000)`.
    pub fn scan_step(&self) -> f64 {
        (1e-3f64).max((self.half as f64).powf(1.0 / (self.p as f64 - 1.0)) / 1e3)
    }

    /// First scan bound, `2^(p-1) k`; doubled on each retry.
    pub fn initial_bound(&self) -> f64 {
        2f64.powi(self.p as i32 - 1) * self.half as f64
    }

    /// Smallest positive root of [`RootQuery::balance`].
    pub fn solve(&self, search: RootSearch) -> Result<f64> {
        let (j, k, p) = (self.effective_rank(), self.half, self.p);
        let step = self.scan_step();
        let mut bound = self.initial_bound();
        let mut last = Error::NoRootFound { max_bound: bound };
        for _ in 0..=search.max_retries {
            match smallest_positive_root(|a| balance(j, k, p, a), step, bound, search.tol) {
                Ok(root) => return Ok(root),
                Err(e @ Error::NoRootFound { .. }) => {
                    last = e;
                    bound *= 2.0;
                }
                Err(e) => return Err(e),
            }
        }
        Err(last)
    }
}

#[inline]
fn balance(j: usize, k: usize, p: u32, alpha: f64) -> f64 {
    let e = p as i32 - 1;
    let (j, k) = (j as f64, k as f64);
    j * alpha.powi(e) - (k - j + 1.0) - (j - 1.0) * (1.0 + alpha).powi(e)
}
