use alloc::string::String;

use crate::field::FieldSpec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient at position {pos} is not an integer")]
    NonIntegerCoefficient { pos: usize },
    #[error("variable X{index} out of range (only {nvars} variables)")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must be below 2^62)")]
    PrimeTooLarge(u64),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inhomogeneous {family}[{index}]")]
    Inhomogeneous { family: char, index: usize },
    #[error("{family}[{index}] is zero")]
    ZeroPolynomial { family: char, index: usize },
    #[error("{family}[{index}] must have positive degree")]
    ConstantPolynomial { family: char, index: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("smoothness diagnostic failed: {0}")]
    SmoothnessDiagnostic(String),
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
}
