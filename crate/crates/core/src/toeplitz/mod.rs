//! Berezin-Toeplitz operators on the sphere.

mod checks;
mod matrix;
mod observable;

pub use checks::{bms1_check, bms2_check, bms3_check, hs_limit_check, CheckRow, CheckTable};
pub use matrix::{monomial_norm, toeplitz_matrix, BergmanBasis, ToeplitzMatrix};
pub use observable::{monomial_average, Monomial, Observable};
