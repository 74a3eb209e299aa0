use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("leading coefficient p_n of the operator is the zero polynomial")]
    ZeroLeadingCoefficient,

    #[error("operator order must be at least 1")]
    InvalidOrder,

    #[error("offset {ell} outside the recurrence range [{lo}, {hi}]")]
    Range { ell: i64, lo: i64, hi: i64 },

    #[error("leading recurrence coefficient q_alpha is identically zero")]
    DegenerateLeading,

    #[error("node {xi} is a root of the leading coefficient p_n (jump vector not recoverable)")]
    SingularNode { xi: String },

    #[error("linear system is singular")]
    SingularSystem,

    #[error("need moments up to index {needed}, only {available} available")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("seed or right-hand side too short: {0}")]
    InsufficientSeed(String),

    #[error("leading recurrence coefficient q_alpha({k}) vanishes")]
    LeadingZero { k: i64 },

    #[error("ill-conditioned system (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("wrong model order: {0}")]
    WrongModelOrder(String),

    #[error("piece {index} is not an explicit polynomial")]
    NonPolynomialPiece { index: usize },

    #[error("p_n vanishes on the expansion interval [{a}, {b}]")]
    SingularExpansionPoint { a: String, b: String },

    #[error("series truncation error estimate {estimate:.3e} exceeds tolerance {tol:.3e}")]
    AccuracyNotMet { estimate: f64, tol: f64 },
}

impl Error {
    /// True for parse and shape errors, as opposed to mathematical
    /// precondition failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidInput(_))
    }
}
