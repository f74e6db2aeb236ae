use thiserror::Error;

/// Errors raised by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A theorem or criterion was asked to run outside its hypotheses.
    #[error("inapplicable: {0}")]
    Inapplicable(String),

    #[error("formula inapplicable (expected-codimension hypothesis violated): {0}")]
    ExpectedCodimension(String),

    #[error("not a projective form: {0}")]
    NotProjective(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Hilbert function did not stabilize within t <= {t_max}")]
    Unstabilized { t_max: usize },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("cyclic dependency between exact triples involving `{0}`")]
    Cycle(String),

    #[error("inconsistent cohomology data: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
