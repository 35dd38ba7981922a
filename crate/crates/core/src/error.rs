use alloc::boxed::Box;

use crate::contact::ContactSolution;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix of shape {rows}x{cols} is not square")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| exceeds tolerance")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not positive definite: pivot {pivot} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("complementary pivoting ended on a secondary ray after {pivots} pivots")]
    RayTermination { pivots: usize },

    #[error("pivot limit of {limit} exceeded")]
    PivotLimitExceeded { limit: usize },

    #[error("numerical breakdown: {reason}")]
    NumericalBreakdown { reason: &'static str },

    #[error("relaxation did not converge in {sweeps} sweeps (residual {residual:e})")]
    MaxIterationsExceeded {
        sweeps: usize,
        residual: f64,
        last: Box<ContactSolution>,
    },

    #[error("invariant violated: {0}")]
    InvariantViolation(&'static str),

    #[error("problem dimension {dim} exceeds enumeration cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("coordinate {value} outside the open interval (0, {length})")]
    OutOfDomain { value: f64, length: f64 },

    #[error("stabilizers {first} and {second} share a position")]
    DuplicatePositions { first: usize, second: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
