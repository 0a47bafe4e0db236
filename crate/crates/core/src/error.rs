use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },
    #[error("expected {expected} components, found {found}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("invalid multiplier: {0}")]
    InvalidMultiplier(String),
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("invalid Lebesgue exponent p = {0}")]
    InvalidExponent(f64),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("initial data is not divergence-free (residual {0:e})")]
    NotDivergenceFree(f64),
    #[error("trajectory does not match solver nodes: {0}")]
    NodeMismatch(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("a1 = {0} lies outside [0, 1)")]
    A1OutOfRange(f64),
    #[error("Picard iteration did not converge after {iterations} iterations (last residual {last_residual:e})")]
    NonConvergence {
        iterations: usize,
        last_residual: f64,
        residuals: Vec<f64>,
    },
    #[error("Picard iteration blew up at iteration {iteration}: norm {norm:e} exceeds {threshold:e}")]
    Blowup {
        iteration: usize,
        norm: f64,
        threshold: f64,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("snapshot format: {0}")]
    Snapshot(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
