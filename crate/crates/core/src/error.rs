use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the set where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure could not certify the requested accuracy.
    #[error("accuracy error in {context}: achieved {achieved:.3e}, required {required:.3e}")]
    Accuracy {
        context: String,
        achieved: f64,
        required: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    /// A time-changed path was queried past the end of its accumulated clock.
    #[error("horizon error: requested time {requested} exceeds available clock {available}")]
    Horizon { requested: f64, available: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn accuracy(context: impl Into<String>, achieved: f64, required: f64) -> Self {
        Error::Accuracy {
            context: context.into(),
            achieved,
            required,
        }
    }
}
