use alloc::string::String;

use crate::form::VarId;

/// Errors raised by the algebra, the solver and the oracle.
///
/// Outcomes of the optimization itself (an infinite optimum, no optimum,
/// an unhandled configuration) are not errors; they are reported through
/// [`crate::solver::Status`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("power {exponent} of an infinite scalar is not defined")]
    UnsupportedPower { exponent: i64 },
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix powers do not converge to the null matrix (nonnegative circuit)")]
    Divergent,
    #[error("expected {expected} weights, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("empty input")]
    Empty,
    #[error("intervals of different modes cannot be compared")]
    ModeMismatch,
    #[error("intervals of different kinds in one minimum")]
    KindMismatch,
    #[error("invalid interval: {0}")]
    InvalidInterval(&'static str),
    #[error("replacement for x{} mentions x{}", .var + 1, .var + 1)]
    SelfReference { var: VarId },
    #[error("linear form is identically -inf")]
    NullForm,
    #[error("no value for x{}", .var + 1)]
    MissingVariable { var: VarId },
    #[error("({row}, x{}) is not a valid pivot", .var + 1)]
    InvalidPivot { row: usize, var: VarId },
    #[error("no candidate inequality")]
    NoCandidates,
    #[error("more than {limit} min/max switches")]
    SwitchLimitExceeded { limit: usize },
    #[error("equalities are not triangular at x{}", .var + 1)]
    NonTriangular { var: VarId },
    #[error("assumption violated: {0}")]
    AssumptionViolated(&'static str),
    #[error("optimal t is -inf, original variables are undefined")]
    DegenerateT,
    #[error("solution status is {0}, expected FINITE")]
    NotFinite(&'static str),
    #[error("grid of {points} points exceeds the cap of {cap}")]
    GridTooLarge { points: u128, cap: u128 },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("the homogenization variable must be finite, got {0}")]
    InvalidH(String),
    #[error("cannot parse scalar {token:?}: {reason}")]
    ParseScalar { token: String, reason: &'static str },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
