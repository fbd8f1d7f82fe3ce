use thiserror::Error;

/// Errors produced anywhere in the reconstruction pipeline.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("evaluation at a singularity: {0}")]
    Singularity(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("ill-conditioned system: {0}")]
    Conditioning(String),
    #[error("repeated pole: {0}")]
    Multiplicity(String),
    #[error("reconstruction failed: {0}")]
    ReconstructionFailure(String),
    #[error("moments inconsistent with the model: {0}")]
    ModelInconsistency(String),
    #[error("division by zero: {0}")]
    Division(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
