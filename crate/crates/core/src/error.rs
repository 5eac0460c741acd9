use std::path::PathBuf;

use thiserror::Error;

use crate::mtx::MtxError;

/// Errors raised by the kernels and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid sparse matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("initial residual is zero; nothing to orthogonalize")]
    ZeroResidual,

    #[error("numerical breakdown: {0}")]
    Breakdown(String),

    #[error("{}: {source}", path.display())]
    Matrix {
        path: PathBuf,
        #[source]
        source: MtxError,
    },

    #[error("right-hand side: {0}")]
    Rhs(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(op: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            op,
            expected,
            found,
        })
    }
}
