use thiserror::Error;

pub type Result<T> = std::result::Result<T, SqueezeError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SqueezeError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("drive amplitude mismatch: epsilon = {epsilon} but lambda * beta = {product}")]
    DriveMismatch { epsilon: f64, product: f64 },

    #[error("no steady state by t = {t}: derivative norm {norm:e} >= tolerance {tol:e}")]
    NonConvergence { t: f64, norm: f64, tol: f64 },

    #[error("population left [0, 1] at t = {t} (eta_a = {eta_a}, eta_b = {eta_b}); reduce dt")]
    StepTooLarge { t: f64, eta_a: f64, eta_b: f64 },

    #[error("Hilbert-space dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("stationary equation is singular: {0}")]
    SingularSystem(String),

    #[error("iterative solve stalled after {iterations} iterations at relative residual {residual:e}")]
    SolverStalled { iterations: usize, residual: f64 },
}

impl SqueezeError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        SqueezeError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
