use epavf_core::CoreError;
use epavf_spectral::SpectralError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, ModelError>;
