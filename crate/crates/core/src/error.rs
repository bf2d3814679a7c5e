use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("value out of floating-point range: {0}")]
    Range(String),

    #[error("invalid two-qubit state: {0}")]
    InvalidState(String),

    #[error("not a density matrix: {0}")]
    NotADensityMatrix(String),

    #[error("bath of {n} spins exceeds the dense-path limit of {max}")]
    ConfigTooLarge { n: usize, max: usize },

    #[error("identity {name} violated: gap {gap:e} exceeds {tol:e}")]
    IdentityViolation { name: &'static str, gap: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
