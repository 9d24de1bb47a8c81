use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square with d >= 1 (got {rows} rows, expected {expected} entries per row)")]
    NotSquare { rows: usize, expected: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{routine} did not converge within {iterations} iterations")]
    NonConvergence { routine: &'static str, iterations: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("roots do not pair into complex conjugates (mismatch {mismatch:e})")]
    ConjugacyViolation { mismatch: f64 },

    #[error("polynomial has a zero leading coefficient")]
    ZeroLeadingCoefficient,

    #[error("matrix is not hyperbolic at tolerance {tau:e}")]
    NotHyperbolic { tau: f64 },

    #[error("shift {epsilon:e} does not clear the tolerance band {tau:e}")]
    ShiftTooSmall { epsilon: f64, tau: f64 },

    #[error("invalid conjugacy class: s={s}, u={u}, d={d}")]
    InvalidClass { s: usize, u: usize, d: usize },

    #[error("time grid is not strictly ascending at index {index}")]
    NonAscendingGrid { index: usize },

    #[error("unsupported dimension {d} (expected {expected})")]
    UnsupportedDimension { d: usize, expected: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
