use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension must be positive")]
    EmptyMatrix,

    #[error("expected {expected} entries, got {got}")]
    WrongEntryCount { expected: usize, got: usize },

    #[error("entry ({row}, {col}) = {value} is negative or not finite")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("vector entry {index} = {value} is negative or not finite")]
    InvalidVectorEntry { index: usize, value: f64 },

    #[error("exponent {0} must be positive")]
    InvalidExponent(f64),

    #[error("scalar {0} must be finite and nonnegative")]
    InvalidScalar(f64),

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("arithmetic overflow: result has non-finite entries")]
    Overflow,

    #[error("matrix is reducible; an irreducible block is required")]
    Reducible,

    #[error("power iteration did not converge: bracket [{lower}, {upper}]")]
    PerronNotConverged { lower: f64, upper: f64 },

    #[error("{lambda} is not a positive element of the requested spectrum")]
    NotAnEigenvalue { lambda: f64 },

    #[error("eigenvector postcondition failed: relative residual {residual:e}")]
    EigenvectorResidual { residual: f64 },

    #[error("Neumann series did not converge for class {class}")]
    NeumannDiverged { class: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("argument {value} is outside the convergence radius {radius}")]
    OutsideRadius { value: f64, radius: f64 },

    #[error("series evaluation hit the term cap {cap} without a truncation certificate")]
    TruncationCap { cap: usize },

    #[error("f(A) has a negative entry {value}; the nonnegativity hypothesis fails")]
    NegativeResult { value: f64 },

    #[error(
        "series has a negative coefficient; max-algebra evaluation needs nonnegative coefficients"
    )]
    SignedSeries,

    #[error("matrices {0} and {1} do not commute")]
    NotCommuting(usize, usize),

    #[error("arity mismatch: expected {expected} operands, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("enumeration oracle limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
