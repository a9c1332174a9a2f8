//! Error type shared by all numeric modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (non-finite values, bad ranges,
    /// degenerate geometry).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two grids that must share a shape do not.
    #[error("shape mismatch: expected {expected_height}x{expected_width}, got {height}x{width}")]
    ShapeMismatch {
        expected_height: usize,
        expected_width: usize,
        height: usize,
        width: usize,
    },

    /// A cost-guarded operation was asked to run on a grid above its limit.
    #[error("grid {height}x{width} exceeds the {limit}x{limit} limit of this operation")]
    SizeLimit {
        height: usize,
        width: usize,
        limit: usize,
    },

    /// An inverse transform was fed a spectrum that is not the transform of a
    /// real field.
    #[error(
        "spectrum is not Hermitian-symmetric: imaginary residual {residual:.3e} of output norm"
    )]
    SymmetryViolation { residual: f64 },

    /// The gradient flow produced a non-finite loss or field value.
    #[error("evolution diverged at step {step}: {detail}")]
    Divergence { step: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
