use thiserror::Error;

/// Failures raised by the generic Hamiltonian machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(CoreError::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
