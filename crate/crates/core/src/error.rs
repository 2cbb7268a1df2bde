use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-positive Jacobian: det F = {det:e} at x = {x:?}")]
    NonPositiveJacobian { det: f64, x: [f64; 3] },

    #[error("evaluation point {x:?} lies outside the domain")]
    EvaluationOutOfDomain { x: [f64; 3] },

    #[error("tensor is not antisymmetric (|W + W^T| = {defect:e})")]
    NotAntisymmetric { defect: f64 },

    #[error("singular tensor: |det| = {det:e} below threshold {threshold:e}")]
    SingularTensor { det: f64, threshold: f64 },

    #[error("invariance defect is not affine in the generators (relative fit residual {residual:e})")]
    NonAffineDefect { residual: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("{failed} check(s) exceeded tolerance")]
    ToleranceFailure { failed: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ToleranceFailure { .. } | Error::NonAffineDefect { .. } => 1,
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}
