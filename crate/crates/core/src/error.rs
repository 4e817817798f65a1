use thiserror::Error;

use crate::algebra::DenseOperator;
use crate::state::{Family, Parity};

pub type Result<T> = std::result::Result<T, QesError>;

#[derive(Debug, Error)]
pub enum QesError {
    #[error("eigenvalue iteration did not converge for matrix {matrix:?}")]
    NoConvergence { matrix: DenseOperator },

    #[error("no closed form implemented for {family} n={n} parity {parity}")]
    Unsupported {
        family: Family,
        n: usize,
        parity: Parity,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("expected {expected} roots, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("coincident Bethe roots at positions {i} and {j}")]
    CoincidentRoots { i: usize, j: usize },

    #[error("state has no parity assigned")]
    MissingParity,

    #[error("tridiagonal eigensolver failed: {0}")]
    Tridiagonal(String),
}
