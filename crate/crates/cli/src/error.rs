//! Process exit policy: 0 success, 2 bad input, 3 size limit, 4 numerical
//! failure. Check failures (gradcheck over threshold) use plain exit 1.

use eil_core::Error as CoreError;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SIZE_LIMIT: i32 = 3;
pub const EXIT_DIVERGENCE: i32 = 4;

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::InvalidInput(_) | CoreError::ShapeMismatch { .. } => EXIT_INPUT,
            CoreError::SizeLimit { .. } => EXIT_SIZE_LIMIT,
            CoreError::SymmetryViolation { .. } | CoreError::Divergence { .. } => EXIT_DIVERGENCE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
