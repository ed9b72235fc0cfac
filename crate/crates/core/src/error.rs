use thiserror::Error;

use crate::gw::Generator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge weight must be a positive integer")]
    ZeroWeight,
    #[error("square class group does not contain the class of -1")]
    MissingMinusOne,
    #[error("generator {0:?} is not part of the square class group")]
    UnknownGenerator(Generator),
    #[error("square class group supports at most 64 generators, got {0}")]
    TooManyGenerators(usize),
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("element lies outside the expected subring: {0}")]
    OutsideSubring(String),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("variable index {index} outside 1..={s}")]
    VariableOutOfRange { index: usize, s: usize },
    #[error("parameter values must be units, got 0")]
    ZeroParameter,
    #[error("assignment has {got} entries, expected {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("unsupported field model: {0}")]
    UnsupportedField(String),
    #[error("degree {0} outside the supported range 1..=4")]
    DegreeOutOfRange(u32),
    #[error("invalid merge configuration: {0}")]
    InvalidConfig(String),
    #[error("inconsistent merge tags: {0}")]
    InconsistentTags(String),
    #[error("invalid twin tree descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("invalid diagonal form entry: {0}")]
    InvalidForm(String),
    #[error("enumeration budget of {0} marked diagrams exceeded")]
    BudgetExceeded(usize),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
