//! Strategyproofness and ratio of the three-point family on two agents.

use facloc::verification::three_point_frontier;
use facloc::{PNorm, SearchConfig};

fn main() -> facloc::Result<()> {
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 20.0).collect();
    let rows = three_point_frontier(PNorm::TWO, &grid, &SearchConfig::default())?;
    println!("q_end  margin     sp     ratio");
    for r in rows {
        println!(
            "{:.2}  {:+.5}  {:<5}  {:.6}",
            r.q_end, r.margin, r.strategyproof, r.ratio
        );
    }
    Ok(())
}
