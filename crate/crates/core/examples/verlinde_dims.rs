//! Verlinde dimensions of closed surfaces and of pairs of pants.

use tqft_hs::lie_data::DominantWeight;
use tqft_hs::s_matrix::SMatrix;
use tqft_hs::verlinde::{dim_z, verlinde_dim, SurfacePiece};

fn main() -> tqft_hs::Result<()> {
    for k in [1, 2, 5, 10] {
        println!("SU(2) genus 2, k = {k}: {}", dim_z(2, k, 2, 0)?);
    }
    for g in 2..=4 {
        println!("SU(3) genus {g}, k = 3: {}", dim_z(3, 3, g, 0)?);
    }
    let s = SMatrix::new(3, 3)?;
    let fund = DominantWeight::new(vec![1, 0])?;
    let pants = SurfacePiece {
        genus: 0,
        boundary_labels: vec![fund.clone(), fund.clone(), fund],
        marked_label: None,
    };
    println!("N(fund, fund, fund) at k = 3: {}", verlinde_dim(&pants, &s)?);
    Ok(())
}
