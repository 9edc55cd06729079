use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Offending element triple for a failed associativity check, `(a*b)*c != a*(b*c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple(pub usize, pub usize, pub usize);

#[derive(Debug, Error)]
pub enum Error {
    #[error("invariant factor {0} must be at least 2")]
    BadFactor(usize),
    #[error("group order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("invalid cayley table: {0}")]
    InvalidTable(String),
    #[error("associativity fails for ({}, {}, {})", .0 .0, .0 .1, .0 .2)]
    NotAssociative(Triple),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("{0} requires an abelian group given by invariant factors")]
    NotAbelian(&'static str),
    #[error("element {element} out of range for group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("subset of size {got} does not match group order {expected}")]
    SubsetOrderMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix of size {rows}x{cols} exceeds the maximum {max}x{max}")]
    MatrixTooLarge { rows: usize, cols: usize, max: usize },
    #[error("matrix is not hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("witness matrix and vector must be nonzero")]
    ZeroWitness,
    #[error("subset is not a union of two cosets")]
    NotTwoCosets,
    #[error("invalid witness triple: {0}")]
    InvalidWitness(String),
    #[error("subset must contain the identity")]
    IdentityNotInSubset,
    #[error("two-coset norm needs q >= 2, got {0}")]
    BadRelativeOrder(usize),
    #[error("gamma2 did not converge: bracket [{lower}, {upper}] after {iterations} projections")]
    NonConvergence { lower: f64, upper: f64, iterations: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
