use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("function is not integrable: {0}")]
    NonIntegrable(String),

    #[error("empty support: {0}")]
    EmptySupport(String),

    #[error("rejection sampler acceptance rate {rate:.3e} is below 1e-6 after {attempts} attempts")]
    AcceptanceTooLow { rate: f64, attempts: u64 },

    #[error("rejection sampler exhausted {attempts} attempts with {accepted} of {wanted} samples")]
    SamplerExhausted {
        attempts: u64,
        accepted: usize,
        wanted: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
