use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma evaluated at a non-positive integer.
    #[error("gamma has a pole at {0}")]
    Pole(f64),

    #[error("invalid fractional order {0}: must be finite and > 0")]
    InvalidOrder(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported function for closed form: {0}")]
    UnsupportedFunction(String),

    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),

    #[error("insufficient data: {usable} usable samples, at least {required} required")]
    InsufficientData { usable: usize, required: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
