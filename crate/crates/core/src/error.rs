use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("memo table index {requested} exceeds cap {cap}")]
    CapExceeded { requested: u64, cap: u64 },
}

/// Errors raised when a list of integers is not a threshold sequence.
///
/// Indices are 1-based, matching the usual `s_1 .. s_n` numbering.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value at index {index} does not exceed its predecessor")]
    NotIncreasing { index: usize },
    #[error("value {value} at index {index} lies outside [{low}, {high}]")]
    BoundViolation { index: usize, value: i64, low: i64, high: i64 },
    #[error("operation requires offset 0, sequence has offset {0}")]
    NonZeroOffset(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid arity {0}, must be >= 2")]
    InvalidArity(u32),
    #[error("internal label list is empty")]
    EmptyLabels,
    #[error("first internal label {got} differs from root label {expected}")]
    RootMismatch { expected: i64, got: i64 },
    #[error("internal labels not strictly decreasing at position {index}")]
    NotDecreasing { index: usize },
    #[error("label {label} at position {index} lies below {min}, outside the tree")]
    UnreachableLabel { index: usize, label: i64, min: i64 },
    #[error("tuple contains no internal nodes")]
    EmptyTuple,
    #[error("malformed tree encoding: {0}")]
    Malformed(String),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("rise {rise} at step {index} is not allowed for arity {k}")]
    InvalidRise { index: usize, rise: i64, k: u32 },
    #[error("path goes below the axis at step {index}")]
    BelowAxis { index: usize },
    #[error("end height {height} exceeds l = {l}")]
    HeightExceedsL { height: i64, l: u32 },
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallotError {
    #[error("malformed ballot word: {0}")]
    Malformed(String),
    #[error("word does not encode a threshold sequence: {0}")]
    NotThreshold(#[from] SequenceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration exceeded the budget of {cap} items")]
pub struct BudgetExceeded {
    pub cap: usize,
}

/// Umbrella error for callers that mix modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Ballot(#[from] BallotError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}
