use thiserror::Error;

use crate::dynamics::DecayDistribution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("loss rate at cell {cell} is zero; decay is undefined without loss on every B site")]
    LosslessSite { cell: usize },

    /// The integration hit `t_max` before the remaining norm fell below the
    /// stopping threshold. The partial distribution is kept for reporting.
    #[error("walk did not converge by t = {t:.3}: residual norm^2 = {residual:e}")]
    NonConvergence {
        residual: f64,
        t: f64,
        partial: Box<DecayDistribution>,
    },

    #[error("eigenvector matrix is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("eigenvalue {re:+e}{im:+e}i with nonzero overlap does not decay")]
    NonDecayingMode { re: f64, im: f64 },

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("eigenpair residual {residual:e} exceeds tolerance {tolerance:e}")]
    EigenResidual { residual: f64, tolerance: f64 },

    #[error("decay distribution is degenerate: P_min = {pmin:e}")]
    DegenerateDistribution { pmin: f64 },
}
