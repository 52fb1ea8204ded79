//! Builds the SU(3) S-matrix at level 4 and prints its invariant report.

use tqft_hs::s_matrix::{ratio_consistency_error, SMatrix};

fn main() -> tqft_hs::Result<()> {
    let s = SMatrix::new(3, 4)?;
    println!("{} labels at level {}", s.len(), s.k());
    for (label, z) in s.labels().iter().zip(s.row(0)) {
        println!("  S_0{label} = {:.6}", z.re);
    }
    let mut report = s.invariant_report();
    report.ratio_consistency_error = Some(ratio_consistency_error(&s)?);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
