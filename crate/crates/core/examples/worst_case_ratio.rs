//! Worst-case approximation ratios found by search, next to the known bounds.

use facloc::{worst_ratio_search, MechanismSpec, PNorm, RatioSearchConfig};

fn main() -> facloc::Result<()> {
    let cfg = RatioSearchConfig::default();
    for p in ["1", "1.5", "2", "3", "inf"] {
        let p: PNorm = p.parse()?;
        let median = worst_ratio_search(&MechanismSpec::Median, p, 6, &cfg)?;
        let lrm = worst_ratio_search(&MechanismSpec::Lrm, p, 2, &cfg)?;
        println!(
            "p={p:<4} median {:.6} (bound {:.6})   lrm {:.6} (bound {:.6})",
            median.ratio,
            p.median_ratio_bound(),
            lrm.ratio,
            p.lrm_ratio()
        );
    }
    Ok(())
}
