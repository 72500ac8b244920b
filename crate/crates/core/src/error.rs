use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} variables, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("arity {0} exceeds the supported maximum of {max}", max = crate::poly::MAX_ARITY)]
    ArityTooLarge(usize),

    #[error("product of two parameter-dependent scalars ({0}) * ({1}) is not a linear form")]
    ParameterProduct(String, String),

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },

    #[error(
        "variable {var} appears with a negative exponent but its image is not a unit monomial"
    )]
    NegativePowerOfNonUnit { var: usize },

    #[error("negative exponent on variable {var}, which is not invertible in this algebra")]
    NegativeExponent { var: usize },

    #[error("quotient input is not a reduced representative: {0}")]
    UnreducedQuotientInput(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(usize, usize),

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("coefficient must be a nonzero rational: {0}")]
    BadCoefficient(String),

    #[error("all generators are zero")]
    ZeroIdeal,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("input exceeds configured limit: {0}")]
    LimitExceeded(String),

    #[error("structure is not graded: {0}")]
    NotGraded(String),

    #[error("zeta squared has a nonzero component of degree {degree} below the threshold (witness term {witness})")]
    ZetaSquareEscapes { degree: i64, witness: String },

    #[error("degree violation: {0}")]
    DegreeViolation(String),

    #[error("degree {0} is too small for this construction")]
    DegreeTooSmall(i64),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("theorem-backed assertion failed: {0}")]
    AssertionFailure(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
