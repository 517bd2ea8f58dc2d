use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {found} out of range (supported: {min}..={max})")]
    DimensionOutOfRange { found: usize, min: usize, max: usize },

    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected a {expected}x{expected} matrix, found {rows}x{cols}")]
    SizeMismatch { expected: usize, rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric (entry ({row}, {col}))")]
    NotSkew { row: usize, col: usize },

    #[error("matrix is not symmetric at entry ({row}, {col}): {value} vs {mirror}")]
    NotSymmetric { row: usize, col: usize, value: f64, mirror: f64 },

    #[error("matrix is not orthogonal (residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },

    #[error("Bianchi defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    BianchiDefect { defect: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("scalar curvature {scal} is not positive; pinching is undefined")]
    NonPositiveScalar { scal: f64 },

    #[error("operator is not pinched (delta_max = {delta_max})")]
    NotPinched { delta_max: f64 },

    #[error("no cone C(b) on the grid contains the operator (finest b tried: {finest_b:e})")]
    CertificationFailed { finest_b: f64 },

    #[error("rejection sampling exhausted its budget of {budget} attempts")]
    SamplingBudget { budget: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
