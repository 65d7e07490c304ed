use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} out of range (supported: {1}..={2})")]
    DimensionOutOfRange(usize, usize, usize),
    #[error("the zero element is not allowed here")]
    ZeroElement,
    #[error("{0} is not square-free")]
    NotSquareFree(u64),
    #[error("radicand {0} is below 2")]
    RadicandTooSmall(u64),
    #[error("radicand product overflows 64 bits")]
    RadicandOverflow,
    #[error("dependent generators: subsets {first:?} and {second:?} both give radicand {radicand}")]
    DependentGenerators {
        first: Vec<usize>,
        second: Vec<usize>,
        radicand: u64,
    },
    #[error("need at least 2 generators, got {0}")]
    TooFewGenerators(usize),
    #[error("precision must be at least {min} bits, got {got}")]
    PrecisionTooLow { got: u32, min: u32 },
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("coefficient key ({0}, {1}) is not an ordered pair of nonzero elements")]
    BadCoefficientKey(u32, u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("search space of {required} elements exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
