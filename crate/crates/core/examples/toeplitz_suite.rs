//! Toeplitz operators on the sphere: norm limit, asymptotic
//! multiplicativity, trace asymptotics and the Hilbert-Smith limit.

use tqft_hs::toeplitz::{bms1_check, bms2_check, bms3_check, hs_limit_check, Observable};

fn main() -> tqft_hs::Result<()> {
    let ks = [8, 16, 32, 64, 128, 256];
    let f: Observable = "x3".parse()?;
    let g: Observable = "x1^2 - x2*x3".parse()?;
    let tables = [
        bms1_check(&f, &ks)?,
        bms2_check(&f, &g, &ks)?,
        bms3_check(&f.mul(&f), &ks)?,
        hs_limit_check(&g, &g, &ks)?,
    ];
    for t in &tables {
        println!("{} ({})  passed: {}", t.suite, t.columns.join(", "), t.passed());
        for r in &t.rows {
            println!("  {:>4}  {:.10}  {:.10}  {:+.3e}", r.k, r.value, r.reference, r.gap);
        }
    }
    Ok(())
}
