use thiserror::Error;

use crate::algebra::MultiIndex;

/// Everything that can go wrong in this crate.
///
/// All arithmetic is exact, so none of these is a numerical failure: each one
/// names a violated precondition of the operation that raised it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial division is not exact")]
    NonExactDivision,

    #[error("component {component} has a nonzero constant term")]
    NonzeroConstantTerm { component: usize },

    #[error("series has a zero constant term and cannot be inverted")]
    ZeroConstantTerm,

    #[error("coefficients up to order {needed} are required but only order {available} is available")]
    InsufficientOrder { needed: usize, available: usize },

    #[error("system is not admissible: {0}")]
    NotAdmissible(String),

    #[error("Jacobian matrix of the indicators is singular")]
    SingularJacobian,

    #[error("operator is not invertible: its indicator has zero constant term")]
    NotInvertible,

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("no interpolation node defined at index {0}")]
    MissingNode(MultiIndex),

    #[error("no interpolation value given at index {0}")]
    MissingValue(MultiIndex),

    #[error("polynomial has a component outside the lower set at index {0}")]
    NotInSpan(MultiIndex),

    #[error("index set is not a lower set: {0} is present but {1} is missing")]
    NotLowerSet(MultiIndex, MultiIndex),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
