use thiserror::Error;

/// Errors shared across the crate.
///
/// The split matters to callers: `Argument`, `Domain`, `Incompatible` and
/// `Unsupported` are validation failures (the request itself is bad), while
/// the remaining variants report that a numerically valid request could not
/// be completed on the given data.
#[derive(Debug, Error)]
pub enum IedError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("series divergence: {0}")]
    Divergence(String),
    #[error("estimation failed: {0}")]
    Estimation(String),
    #[error("expansion failed: {0}")]
    Expansion(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("sampler failed: {0}")]
    Sampler(String),
    #[error("experiment precondition failed: {0}")]
    Experiment(String),
}

impl IedError {
    /// True for errors that indicate a malformed request rather than a
    /// data-dependent failure. Used by the CLI to pick exit codes.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            IedError::Argument(_)
                | IedError::Domain(_)
                | IedError::Incompatible(_)
                | IedError::Unsupported(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, IedError>;
