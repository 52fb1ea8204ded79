//! Curve operators on the genus-two pants decomposition and their
//! Hilbert-Smith Gram matrix.

use tqft_hs::curve_ops::{curve_operator_on, gram_matrix, BlockDecomposition, CutSystem, LabeledMulticurve};
use tqft_hs::lie_data::DominantWeight;

fn main() -> tqft_hs::Result<()> {
    let cut = CutSystem::genus_two_pants(2, 0);
    let dec = BlockDecomposition::new(&cut, 3)?;
    println!("{} blocks, total dimension {}", dec.len(), dec.total_dim());

    let fund = DominantWeight::new(vec![1])?;
    let ops = ["a", "b", "c"]
        .iter()
        .map(|c| curve_operator_on(&dec, &LabeledMulticurve::single(c, fund.clone())))
        .collect::<tqft_hs::Result<Vec<_>>>()?;
    for (labels, eig, dim) in ops[0].blocks().filter(|b| b.2 > 0) {
        let labels: Vec<String> = labels.iter().map(ToString::to_string).collect();
        println!(
            "  block {:<20} dim {dim:>2}  eigenvalue of Z(a) {:+.6}",
            labels.join(" "),
            eig.re
        );
    }
    for row in gram_matrix(&ops)? {
        let row: Vec<String> = row.iter().map(|z| format!("{:10.4}", z.re)).collect();
        println!("{}", row.join(" "));
    }
    Ok(())
}
