//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the toolkit. Verdict-style outcomes (not a frame, not
/// tight as a *report*) are carried in result structs; these variants are for
/// contract violations and numerical breakdowns.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric: asymmetry {asymmetry:.3e} exceeds tolerance {tolerance:.3e}")]
    NonSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("non-finite entry encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("rank deficient: row {row} has pivot {pivot:.3e} below threshold")]
    RankDeficient { row: usize, pivot: f64 },

    #[error("matrix is not positive definite: pivot {pivot:.3e} at column {col}")]
    NotPositiveDefinite { col: usize, pivot: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("not a fusion frame: lower bound {lower:.3e} is at or below the frame tolerance")]
    NotAFrame { lower: f64 },

    #[error("operation requires a tight fusion frame (spread {spread:.3e} exceeds tolerance)")]
    NotTight { spread: f64 },

    #[error("operation requires equi-dimensional subspaces (found dimensions {dims:?})")]
    NotEquiDimensional { dims: Vec<usize> },

    #[error("erasure analysis requires a white signal model")]
    NotWhiteSignal,

    #[error("model is numerically singular: {0}")]
    SingularModel(String),

    #[error("construction failed certification: {0}")]
    ConstructionFailed(String),

    #[error("invalid frame file: {0}")]
    InvalidFrameFile(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
