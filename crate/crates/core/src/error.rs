use thiserror::Error;

use crate::expr_io::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Samelson degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },

    #[error("generator {name} has odd Samelson degree {degree}; only even schedules are supported")]
    OddParityUnsupported { name: String, degree: u32 },

    #[error("invalid generator schedule: {0}")]
    InvalidSchedule(String),

    #[error("operands live over different generator schedules")]
    MixedSchedules,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("element is not in the image of the free Lie algebra")]
    NotALieElement,

    #[error("expression uses tensor products and cannot be read as a Lie element")]
    NotALieExpression,

    #[error("element is not homogeneous")]
    NonHomogeneous,

    #[error("an iterated commutator needs at least two indices, got {0}")]
    TooFewIndices(usize),

    #[error("index {index} is out of range (1..={max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("scalars must be nonzero")]
    ZeroScalar,

    #[error("only the scalars +1 and -1 are allowed in Z-lattice mode")]
    ScalingInZMode,

    #[error("coefficients must be integers in Z-lattice mode")]
    NonIntegral,

    #[error("degree mismatch: expected Samelson degree {expected}, found {found:?}")]
    DegreeMismatch { expected: u32, found: Option<u32> },

    #[error("translation term {0} is not decomposable")]
    NotDecomposable(String),

    #[error("alpha must be nonzero")]
    ZeroAlpha,

    #[error("no alpha assigned to {0}")]
    MissingAlpha(String),

    #[error("morphism is not invertible over the coefficient ring")]
    NotInvertible,

    #[error("linear part of the morphism is not diagonal")]
    NonDiagonalLinearPart,

    #[error("group of order {0} is too large to enumerate")]
    GroupTooLarge(u64),

    #[error("value does not fit in a 64-bit integer")]
    Overflow,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("JSON document does not match schema whitealg/1: {0}")]
    SchemaMismatch(String),

    #[error("malformed JSON: {0}")]
    MalformedJson(String),
}
