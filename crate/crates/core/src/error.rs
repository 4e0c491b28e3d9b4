use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("hard-core violation between bodies {i} and {j}: distance {distance:e} < {contact:e}")]
    HardCore {
        i: usize,
        j: usize,
        distance: f64,
        contact: f64,
    },

    #[error("enumeration refused: n = {n} exceeds the cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("partition scheme check failed: {0}")]
    PartitionScheme(String),

    /// A precondition of an inequality chain does not hold.
    #[error("bound precondition violated: {0}")]
    Precondition(String),

    #[error("typicality band exceeds orbital gap: c1 = {c1:e} <= 0")]
    TypicalityBand { c1: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("sampler error: {0}")]
    Sampler(String),

    #[error("chain not converged: {0}")]
    NotConverged(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
