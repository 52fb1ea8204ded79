//! Compares the level normalization `k^-3` with the skein normalization
//! `2^3 p^-3`, `p = 2k + 4`, for SU(2) in genus two.

use tqft_hs::asymptotics::{mn_scaled_sequence, richardson_extrapolate, scaled_hs_sequence};
use tqft_hs::curve_ops::{CutSystem, LabeledMulticurve};
use tqft_hs::lie_data::DominantWeight;

fn main() -> tqft_hs::Result<()> {
    let cut = CutSystem::non_separating(2, 2, 0);
    let mc = LabeledMulticurve::single("c1", DominantWeight::new(vec![1])?);
    let ks = [125, 250, 500, 1000, 2000];
    let ps: Vec<u32> = ks.iter().map(|k| 2 * k + 4).collect();
    let level = scaled_hs_sequence(&cut, &mc, &mc, &ks)?;
    let skein = mn_scaled_sequence(&cut, &mc, &mc, &ps)?;
    for (a, b) in level.points.iter().zip(&skein.points) {
        let rel = (a.scaled - b.scaled).norm() / a.scaled.norm();
        println!(
            "k = {:>4}  level {:.8}  skein {:.8}  relative gap {rel:.2e}",
            a.k, a.scaled.re, b.scaled.re
        );
    }
    let (l, s) = (richardson_extrapolate(&level, 2)?, richardson_extrapolate(&skein, 2)?);
    println!(
        "limits: level {:.10} +- {:.1e}, skein {:.10} +- {:.1e}",
        l.value.re, l.error_bound, s.value.re, s.error_bound
    );
    Ok(())
}
