use ipalg_lp::LpError;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("variable `{variable}` has no value `{value}`")]
    UnknownValue { variable: String, value: String },
    #[error("too many variables: {0} (at most 64 are supported)")]
    TooManyVariables(usize),
    #[error("scope {sub} is not a subset of {sup}")]
    NotSubset { sub: String, sup: String },
    #[error("gamble is not measurable with respect to {0}")]
    NotMeasurable(String),
    #[error("operands live on different possibility spaces")]
    SpaceMismatch,
    #[error("expected {expected} values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("invalid mass function: {0}")]
    InvalidMass(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("content kinds differ: {0}")]
    KindMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(Precondition),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Violated preconditions of structural operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Precondition {
    #[error("running intersection certificate is invalid at index {0}")]
    InvalidCertificate(usize),
    #[error("knowledge base is inconsistent")]
    Inconsistent,
    #[error("pieces {0} and {1} are not pairwise compatible")]
    NotPairwiseCompatible(usize, usize),
    #[error("knowledge base is empty")]
    Empty,
    #[error("{0} is not a support of the piece")]
    Support(String),
}

impl Error {
    /// True for desk-scale guard violations.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Lp(LpError::Guard { .. }))
    }
}
