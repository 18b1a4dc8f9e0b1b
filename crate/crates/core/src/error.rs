use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (relative residual {residual:.3e} > {tolerance:.1e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("eigen-solver did not converge within {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("not PSD: eigenvalue {eigenvalue:.3e} below clamp threshold {threshold:.3e}")]
    NotPsd { eigenvalue: f64, threshold: f64 },

    #[error("singular/ill-conditioned: eigenvalue {eigenvalue:.3e} <= {epsilon:.1e}")]
    Singular { eigenvalue: f64, epsilon: f64 },

    #[error("singular transformation matrix ({which}): smallest singular value {sigma_min:.3e}")]
    SingularTransform { which: &'static str, sigma_min: f64 },

    #[error("map not strictly positive at iterate {iteration}: {stage} has eigenvalue {eigenvalue:.3e}")]
    NotStrictlyPositive {
        iteration: usize,
        stage: &'static str,
        eigenvalue: f64,
    },

    #[error("not a zero: f = {value:.3e} exceeds tolerance {tolerance:.1e}")]
    NotAZero { value: f64, tolerance: f64 },

    #[error("fixed-point residual {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    NotAFixedPoint { residual: f64, tolerance: f64 },

    #[error("degenerate section plane: {0}")]
    DegeneratePlane(String),

    #[error("unbounded section along theta = {theta}")]
    UnboundedSection { theta: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
