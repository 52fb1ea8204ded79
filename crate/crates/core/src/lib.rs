pub mod asymptotics;
pub mod cache;
pub mod cli;
pub mod curve_ops;
pub mod error;
pub mod lie_data;
pub mod numeric;
pub mod s_matrix;
pub mod toeplitz;
pub mod verlinde;

pub use error::{Error, Result};
