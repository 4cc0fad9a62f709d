use thiserror::Error;

use crate::algebra::Field;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("matrix is singular (largest remaining pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("matrix is not self-adjoint (asymmetry {residual:e})")]
    NotSelfAdjoint { residual: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("Jacobi sweeps did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("matrix is not injective: rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("matrix is not an isometric embedding (residual {residual:e})")]
    NotIsometric { residual: f64 },

    #[error("point lies below the top stratum: 1 - g is singular")]
    LevelDeficient,

    #[error("rank is ambiguous at tolerance: pivot {pivot:e} within a factor 10 of threshold {threshold:e}")]
    AmbiguousRank { pivot: f64, threshold: f64 },

    #[error("{0}")]
    InvalidInput(String),
}
