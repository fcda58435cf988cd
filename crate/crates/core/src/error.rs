use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a mathematical function.
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("non-finite input")]
    NonFinite,

    #[error("singular diagonal at row {row}")]
    SingularDiagonal { row: usize },

    #[error("index ({row}, {col}) out of range for dimension {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },

    #[error("invalid CSR structure: {0}")]
    InvalidStructure(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("iteration is non-convergent (spectral radius {rho})")]
    NonConvergent { rho: f64 },

    #[error("right-hand side is zero; relative residual undefined")]
    ZeroRhs,

    #[error("dimension {n} exceeds dense limit {max}")]
    TooLarge { n: usize, max: usize },

    #[error("power iteration collapsed to the zero vector")]
    ZeroVector,

    #[error("eigenvalue iteration failed to converge")]
    EigenNoConvergence,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
