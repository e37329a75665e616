use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("length mismatch in {context}: expected {expected}, got {found}")]
    LengthMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("spectral function is not finite at eigenvalue {0}")]
    NonFinite(f64),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(SpectralError::LengthMismatch {
            context,
            expected,
            found,
        })
    }
}
