use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mean-field iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("eigenvalue computation failed to converge")]
    EigenFailure,

    #[error("Hurwitz minor {index} is numerically zero ({value:e}); treating as marginal")]
    DegeneratePolynomial { index: usize, value: f64 },

    #[error("drift matrix is not stable (max Re λ = {max_real_part:e})")]
    UnstableSystem { max_real_part: f64 },

    #[error("Lyapunov linear system is singular")]
    SingularSolve,

    #[error("covariance matrix is not physical: {0}")]
    NonPhysicalCM(String),

    #[error("two-mode determinant {0:e} is too small for the steering ratio")]
    DegenerateDeterminant(f64),

    #[error("argument {0} is outside the domain x >= 1/2")]
    DomainError(f64),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
}
