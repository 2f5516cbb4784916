use thiserror::Error;

/// Errors raised by the diaphony toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("base {0} is not prime")]
    NonPrimeBase(u64),
    #[error("base {0} appears more than once")]
    DuplicateBase(u32),
    #[error("at least one base is required")]
    EmptyBases,
    #[error("{0} is outside the unit interval [0, 1)")]
    OutOfUnitInterval(f64),
    #[error("digit {digit} is not valid in base {base}")]
    InvalidDigit { digit: u32, base: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("base mismatch: {left} vs {right}")]
    BaseMismatch { left: u32, right: u32 },
    #[error("index range starting at {start} with {count} points exceeds u64")]
    CountOverflow { start: u64, count: u64 },
    #[error("truncation box has {size} indices, above the cap of {cap}")]
    BoxTooLarge { size: u128, cap: u64 },
    #[error("truncation box entries must be >= 1")]
    InvalidBox,
    #[error("the zero index vector has no lemma bound")]
    ZeroIndex,
    #[error("at least one point is required")]
    EmptyPoints,
    #[error("a point needs at least one coordinate")]
    EmptyPoint,
    #[error("depth must be positive")]
    InvalidDepth,
    #[error("phase arithmetic overflowed for index {0}")]
    PhaseOverflow(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
