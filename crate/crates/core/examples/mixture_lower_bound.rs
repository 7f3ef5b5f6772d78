//! Lower bounds for mixtures of dictators, order statistics and the optimum.

use facloc::MixtureLowerBound;

fn main() -> facloc::Result<()> {
    for p in [3, 4, 5] {
        for k in [2, 10, 100] {
            let c = MixtureLowerBound::compute(p, k)?;
            println!(
                "p={p} k={k:<4} P[opt] <= {:.7}  ratio >= {:.7}  checks ok: {}",
                c.p_opt_bound,
                c.ratio_lower_bound,
                c.bound_checks_hold()
            );
        }
    }
    print!("{}", MixtureLowerBound::compute(3, 4)?.root_table_csv());
    Ok(())
}
