//! Scaled Hilbert-Smith pairings of a non-separating curve on a genus-two
//! surface and their extrapolated limit, compared with the integral of the
//! squared holonomy function.

use std::f64::consts::PI;

use tqft_hs::asymptotics::{richardson_extrapolate, scaled_hs_sequence};
use tqft_hs::curve_ops::{CutSystem, LabeledMulticurve};
use tqft_hs::lie_data::DominantWeight;

fn main() -> tqft_hs::Result<()> {
    let cut = CutSystem::non_separating(2, 2, 0);
    let mc = LabeledMulticurve::single("c1", DominantWeight::new(vec![1])?);
    let seq = scaled_hs_sequence(&cut, &mc, &mc, &[125, 250, 500, 1000, 2000])?;
    for p in &seq.points {
        println!(
            "k = {:>4}  raw = {:>16.2}  k^-{} raw = {:.8}",
            p.k, p.raw.re, seq.m, p.scaled.re
        );
    }
    let est = richardson_extrapolate(&seq, 2)?;
    println!(
        "extrapolated {:.10} (error bound {:.1e})",
        est.value.re, est.error_bound
    );
    println!("1/3 - 1/pi^2 = {:.10}", 1.0 / 3.0 - 1.0 / (PI * PI));
    Ok(())
}
