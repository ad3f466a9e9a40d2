use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field order {0} is not a prime power in 2..=65536")]
    InvalidOrder(u64),
    #[error("polynomial {poly:?} is not a monic irreducible of degree {m} over F_{p}")]
    BadPolynomial { p: u32, m: u32, poly: Vec<u32> },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{value} is not an element of F_{q}")]
    NotAnElement { value: u64, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coordinate {value} is outside 1..={order}")]
    CoordinateOutOfRange { value: u64, order: u64 },
    #[error("{what} requires {required} but the budget allows {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u64,
    },
    #[error("matrix is {rows}x{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("windows {index} and {} do not overlap on {overlap} symbols", index + 1)]
    NotFusable { index: usize, overlap: usize },
    #[error("index {index} out of range (count {count})")]
    IndexOutOfRange { index: u128, count: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
