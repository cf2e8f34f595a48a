//! Dense linear-algebra kernel and probability-tail functions.
//!
//! Everything here is a pure function of its inputs; values are immutable
//! after construction and safe to share across threads.

mod dist;
mod factor;
mod matrix;
mod solve;

pub use dist::{chi2_cdf, chi2_sf, erfc, f_sf, ln_gamma, normal_cdf, normal_sf};
pub use factor::{clipped_psd_pseudoinverse, pseudoinverse, symmetric_eigen};
pub use matrix::Matrix;
pub use solve::{solve_least_squares, LeastSquaresFit, RANK_TOLERANCE};

/// Errors surfaced by the numeric kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("rank deficient design: numerical rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("degrees of freedom must be positive")]
    ZeroDegreesOfFreedom,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
