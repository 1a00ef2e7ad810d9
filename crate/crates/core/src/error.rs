use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown character {ch:?} at byte {offset}")]
    UnknownChar { offset: usize, ch: char },
    #[error("exponent overflow at byte {offset}")]
    ExponentOverflow { offset: usize },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("coefficient of {monomial} is not divisible by p")]
    NotDivisible { monomial: String },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("wrong degree: {0}")]
    WrongDegree(String),
    #[error("not F-split: {0}")]
    NotFSplit(String),
    #[error("singular curve: {0}")]
    Singular(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("precision validation failed: {0}")]
    Precision(String),
    #[error("F^1 is not preserved")]
    F1NotPreserved,
    #[error("fixed-form dimension deficit: found {found} of {expected} at truncation degree {degree}")]
    DimensionDeficit { found: usize, expected: usize, degree: u32 },
    #[error("non-integrable form: {0}")]
    NonIntegrable(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("linear solver failure: {0}")]
    Solver(String),
}

impl Error {
    /// Short machine-readable code used in CLI error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownChar { .. } => "unknown_char",
            Error::ExponentOverflow { .. } => "exponent_overflow",
            Error::InvalidModulus(_) => "invalid_modulus",
            Error::NotDivisible { .. } => "not_divisible",
            Error::RingMismatch(_) => "ring_mismatch",
            Error::WrongDegree(_) => "wrong_degree",
            Error::NotFSplit(_) => "not_f_split",
            Error::Singular(_) => "singular",
            Error::Precondition(_) => "precondition",
            Error::Precision(_) => "precision",
            Error::F1NotPreserved => "f1_not_preserved",
            Error::DimensionDeficit { .. } => "dimension_deficit",
            Error::NonIntegrable(_) => "non_integrable",
            Error::Inconsistent(_) => "inconsistent",
            Error::Solver(_) => "solver",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
