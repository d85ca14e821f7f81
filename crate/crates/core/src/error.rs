use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("relator is empty")]
    EmptyRelator,

    #[error("relator {0} is a proper power")]
    ProperPower(String),

    #[error("torsion exponent must be greater than 1, got {0}")]
    InvalidExponent(i64),

    #[error("psi(k) requires k != 0")]
    PsiZero,

    #[error("map {0} does not send (a, b) to a basis of F(a, b)")]
    NotBasis(String),

    #[error("word has no a-letters")]
    NoALetters,

    #[error("map has a trivial generator image")]
    TrivialImage,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("derived-subgroup relator: {0}")]
    DerivedBranch(String),

    #[error("unsupported hypotheses: {}", .0.join("; "))]
    Hypotheses(Vec<String>),

    #[error("gave up after {0} rejected samples")]
    SamplingExhausted(usize),

    /// A witness combination that the classification theorem rules out.
    #[error("theory violation: {0}")]
    TheoryViolation(String),
}
