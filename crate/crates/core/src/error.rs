use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("zero row {0}")]
    ZeroRow(usize),
    #[error("diagonal not positive at index {0}")]
    DiagonalNotPositive(usize),
    #[error("diagonal entry {0} is not 1: call rescale_unit_diagonal first")]
    NotUnitDiagonal(usize),
    #[error("row {0} of the factor is not unit norm")]
    RowNotNormalized(usize),
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("matrix not PSD (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("relaxation parameter must lie in (0, 2), got {0}")]
    InvalidOmega(f64),
    #[error("n = {n} exceeds the enumeration limit {limit}: {hint}")]
    TooLarge {
        n: usize,
        limit: usize,
        hint: &'static str,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
