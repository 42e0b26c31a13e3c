use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid perturbation fraction {0}: must lie in [0, 0.5)")]
    InvalidPerturbation(f64),

    #[error("invalid advection speed ({0}, {1}): speeds must be positive")]
    InvalidSpeed(f64, f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {0} lies outside the reference interval [-1, 1]")]
    Domain(f64),

    #[error("polynomial degree {0} is not supported here: {1}")]
    UnsupportedDegree(usize, &'static str),

    #[error("discretizations do not match: {0}")]
    Incompatible(String),

    #[error("unsupported mesh: {0}")]
    UnsupportedMesh(String),

    #[error("local projection system is singular on cell {cell}")]
    ProjectionFailure { cell: usize },

    #[error("resolvent iteration did not converge (contraction estimate {contraction:.3e}, residual {residual:.3e}); time step too large")]
    CflTooLarge { contraction: f64, residual: f64 },

    #[error("power iteration did not converge after {iterations} iterations (last estimate {estimate:.12e})")]
    PowerIteration {
        iterations: usize,
        estimate: f64,
        iterate: Vec<f64>,
    },

    #[error("dense operator export refused: {size} unknowns exceeds cap {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("solution blew up at step {step}")]
    BlowUp { step: usize },

    #[error("unsupported scheme configuration: {0}")]
    UnsupportedScheme(String),
}

pub type Result<T> = std::result::Result<T, Error>;
