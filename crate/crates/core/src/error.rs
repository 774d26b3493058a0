use thiserror::Error;

/// Errors produced by the transform library and the bank model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("modulus {0} does not fit in 32 bits")]
    ModulusTooLarge(u64),

    #[error("{g} is not a primitive root modulo {p}")]
    NotPrimitiveRoot { p: u32, g: u32 },

    #[error("transform size {n} does not divide p-1 for p={p}")]
    SizeNotSupported { p: u32, n: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("modulus mismatch: expected {expected}, got {actual}")]
    ModulusMismatch { expected: u32, actual: u32 },

    #[error("residue {value} at index {index} is not reduced modulo {p}")]
    ResidueOutOfRange { index: usize, value: u32, p: u32 },

    #[error("twiddle table direction does not match the requested transform")]
    DirectionMismatch,

    #[error("bad six-step factorization {n1}x{n2} for size {n}")]
    BadFactorization { n: usize, n1: usize, n2: usize },

    #[error("unsupported variant for this operation: {0}")]
    UnsupportedVariant(String),

    #[error("unknown variant name: {0}")]
    UnknownVariant(String),

    #[error("invalid bank configuration: {0}")]
    InvalidConfig(String),

    #[error("partition search exceeded its budget of {0} nodes")]
    SearchBudgetExceeded(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
