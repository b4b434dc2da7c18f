use thiserror::Error;

/// Errors raised by field construction and by the counting/verification operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {m} is outside the supported range 2..=30")]
    DegreeOutOfRange { m: u32 },
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {m}")]
    NotIrreducible { modulus: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("subfield degree {s} does not divide m = {m}")]
    NonDivisorSubfieldDegree { s: u32, m: u32 },
    #[error("input must be a nonzero field element")]
    ZeroInput,
    #[error("{d} does not divide the multiplicative group order {order}")]
    NonDivisorOrder { d: u64, order: u64 },
    #[error("m = {m} exceeds the enumeration cap of {cap} for this operation")]
    FieldTooLarge { m: u32, cap: u32 },
    #[error("operation requires an even extension degree, got m = {m}")]
    OddDegree { m: u32 },
    #[error("operation requires a positive parameter, got {0}")]
    BadParameter(String),
    #[error("cubic coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("c must lie outside {{0, 1}}")]
    DegenerateC,
    #[error("power sums do not determine an integral coefficient a_{index}")]
    NonIntegralCoefficient { index: usize },
    #[error("closed form for {what} at m = {m} is not an integer")]
    NonIntegralCount { what: &'static str, m: u32 },
    #[error("invalid field element {0:?}")]
    InvalidElement(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
