//! The cost-minimizing facility location under different norms.

use facloc::{optimal_location, LocationProfile, PNorm};

fn main() -> facloc::Result<()> {
    let x: LocationProfile = "0, 0, 1, 4, 10".parse()?;
    for p in ["1", "1.5", "2", "3", "8", "inf"] {
        let p: PNorm = p.parse()?;
        let r = optimal_location(&x, p);
        println!(
            "p={p:<4} y*={:.9} cost={:.9} via {:?}",
            r.location,
            r.cost.value(),
            r.method
        );
    }
    Ok(())
}
