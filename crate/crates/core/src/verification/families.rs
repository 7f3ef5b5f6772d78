//! Profile families used by the scans and searches.

use rand::Rng;

use crate::error::Result;
use crate::model::{LocationProfile, PNorm};
use crate::optimizer::{RootQuery, RootSearch};

/// Largest half-size for which the mixture adversarial profiles join the
/// structured families.
const ADVERSARIAL_MAX_HALF: usize = 16;

/// `k` agents at 0 and `k` at 1.
pub fn half_half(k: usize) -> Result<LocationProfile> {
    LocationProfile::from_clusters(&[(0.0, k), (1.0, k)])
}

/// `left` agents at 0 and `right` at 1.
pub fn two_point(left: usize, right: usize) -> Result<LocationProfile> {
    LocationProfile::from_clusters(&[(0.0, left), (1.0, right)])
}

pub fn random_profile<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LocationProfile {
    let xs = (0..n).map(|_| rng.gen::<f64>()).collect();
    LocationProfile::new(xs).expect("n >= 2 finite coordinates")
}

/// The `k` adversarial profiles of the mixture lower bound for `n = 2k`
/// agents and integer `p` in `[3, 16]`: rank `j` puts `j` agents at
/// `-a_j`, `k - j` at 0, `k - j + 1` at 1 and `j - 1` at `1 + a_j`, in
/// agent order.
pub fn mixture_adversarial_profiles(k: usize, p: u32) -> Result<Vec<LocationProfile>> {
    (1..=k)
        .map(|j| {
            let a = RootQuery::new(j, k, p)?.solve(RootSearch::default())?;
            LocationProfile::from_clusters(&adversarial_clusters(j, k, a))
        })
        .collect()
}

pub(crate) fn adversarial_clusters(j: usize, k: usize, a: f64) -> Vec<(f64, usize)> {
    [(-a, j), (0.0, k - j), (1.0, k - j + 1), (1.0 + a, j - 1)]
        .into_iter()
        .filter(|c| c.1 > 0)
        .collect()
}

/// Deterministic profiles that drive the known worst cases: every two-point
/// split of `n` agents over `{0, 1}` (half-half, all-but-one clustered, and
/// the unit two-agent profile among them) and, for even `n` and integer
/// `3 <= p <= 16`, the mixture adversarial profiles.
pub fn structured_profiles(n: usize, p: PNorm) -> Vec<LocationProfile> {
    let mut out: Vec<LocationProfile> = (1..n)
        .filter_map(|left| two_point(left, n - left).ok())
        .collect();
    if n.is_multiple_of(2) && n / 2 <= ADVERSARIAL_MAX_HALF {
        if let Some(e) = p.as_integer().filter(|e| (3..=16).contains(e)) {
            if let Ok(profiles) = mixture_adversarial_profiles(n / 2, e) {
                out.extend(profiles);
            }
        }
    }
    out
}
