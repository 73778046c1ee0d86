use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input outside the admissible parameter domain.
    #[error("domain error in `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// A numerical procedure did not reach its target accuracy.
    #[error("accuracy error in {context}: best estimate {estimate:e}, error estimate {error:e}")]
    Accuracy {
        context: String,
        estimate: f64,
        error: f64,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    /// Name of the offending input for domain errors.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            Error::Domain { field, .. } => Some(field),
            Error::Accuracy { .. } => None,
        }
    }
}
