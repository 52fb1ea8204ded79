//! Operator norms of a labeled non-separating curve approach the dimension
//! of the label.

use tqft_hs::asymptotics::norm_limit_check;
use tqft_hs::curve_ops::{CutSystem, LabeledMulticurve};
use tqft_hs::lie_data::DominantWeight;

fn main() -> tqft_hs::Result<()> {
    for (n, label) in [(2, vec![1]), (3, vec![1, 0]), (3, vec![1, 1])] {
        let cut = CutSystem::non_separating(n, 2, 0);
        let mc = LabeledMulticurve::single("c1", DominantWeight::new(label)?);
        let report = norm_limit_check(&cut, &mc, &[10, 25, 50, 100, 200])?;
        println!("SU({n}) {}:", mc.labels["c1"]);
        for r in &report.rows {
            println!(
                "  k = {:>3}  norm {:.8}  dim {}  k * gap {:.4}",
                r.k,
                r.norm,
                r.dim,
                r.k as f64 * r.gap
            );
        }
        println!("  passed: {}", report.passed());
    }
    Ok(())
}
