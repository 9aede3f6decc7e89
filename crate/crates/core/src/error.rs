use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation point outside the domain of the quantity.
    #[error("{quantity} is undefined at {at}: {reason}")]
    Domain {
        quantity: &'static str,
        at: f64,
        reason: String,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An input function returned NaN or ±inf during integration.
    #[error("non-finite input {value} at t = {t}")]
    NonFinite { t: f64, value: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(quantity: &'static str, at: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            quantity,
            at,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
