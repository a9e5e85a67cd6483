use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates from conj of ({col}, {row}) by {deviation:.3e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver did not converge (LAPACK info = {info})")]
    Eigensolver { info: i32 },

    #[error("ground level is degenerate (gap {gap:.3e} below {tolerance:.3e}); build the state with eigenstate_projector instead")]
    DegenerateGround { gap: f64, tolerance: f64 },

    #[error("level index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative probability {value:.3e} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probability vector is not normalized: |sum - 1| = {deviation:.3e}")]
    Unnormalized { deviation: f64 },

    #[error("bound `{bound}` violated by {excess:.3e} (slack {slack:.0e})")]
    BoundViolation {
        bound: &'static str,
        excess: f64,
        slack: f64,
    },

    #[error("invariant `{name}` violated: {detail}")]
    Invariant { name: &'static str, detail: String },

    #[error("fit refused: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
