use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HscaError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension m = {0} (expected 2 <= m <= 8)")]
    UnsupportedDimension(usize),

    #[error("reflection axis must have |a|^2 = 1 exactly")]
    NonUnitVector,

    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },

    #[error("input is not a u-homogeneous harmonic polynomial of degree {k}")]
    NotHarmonic { k: usize },

    #[error("input does not lie in the {expected} summand")]
    WrongSummand { expected: &'static str },

    #[error("unsupported (m,k) = ({m},{k}): {reason}")]
    UnsupportedParams { m: usize, k: usize, reason: String },

    #[error("evaluation point is singular: {0}")]
    SingularPoint(String),

    #[error("point does not supply the {0} variable family")]
    MissingFamily(&'static str),

    #[error("quadratic extensions with different radicands: sqrt({0}) vs sqrt({1})")]
    RadicandMismatch(u64, u64),

    #[error("point outside the admissible domain: {0}")]
    OutOfDomain(String),

    #[error("singular linear system")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, HscaError>;

impl From<serde_json::Error> for HscaError {
    fn from(e: serde_json::Error) -> Self {
        HscaError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for HscaError {
    fn from(e: std::io::Error) -> Self {
        HscaError::Io(e.to_string())
    }
}
