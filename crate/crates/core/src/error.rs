use thiserror::Error;

use crate::state::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(ValidationReport),

    #[error("infeasible assignment: {0}")]
    Infeasible(String),

    #[error("cannot purify a rank-{rank} state with a {dim_e}-dimensional environment")]
    PurificationImpossible { rank: usize, dim_e: usize },

    #[error("incompatible effective channel: {0}")]
    IncompatibleSpec(String),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
