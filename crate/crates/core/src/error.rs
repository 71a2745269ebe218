//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two distributions of different qudit dimension were combined.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// The requested qudit dimension cannot host the higher-level code.
    #[error("dimension {dimension} not admissible for polynomial code: {reason}")]
    InadmissibleDimension { dimension: u32, reason: String },

    /// The requested protocol/mode combination is not defined.
    #[error("unsupported protocol: {0}")]
    UnsupportedProtocol(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
