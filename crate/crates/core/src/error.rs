use thiserror::Error;

/// Errors produced by construction, assembly, and solver routines.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("gap must be positive everywhere: minimum {min} at cell ({i}, {j})")]
    NonPositiveGap { min: f64, i: usize, j: usize },

    #[error("grid mismatch: {context}")]
    GridMismatch { context: String },

    #[error("`{name}` = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error(
        "solver did not converge after {iterations} iterations \
         (relative residual {residual:.3e}, requested {tol:.3e})"
    )]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    #[error(
        "pressure iteration stalled after {iterations} outer iterations \
         (relative residual {residual:.3e}, requested {tol:.3e}; \
         last residuals {trace_tail:?})"
    )]
    SaddleStagnation {
        iterations: usize,
        residual: f64,
        tol: f64,
        trace_tail: Vec<f64>,
    },

    #[error("zero pivot at row {row} in tridiagonal solve")]
    ZeroPivot { row: usize },

    #[error("assembly error: {context}")]
    Assembly { context: String },

    #[error("invalid configuration: {context}")]
    InvalidConfig { context: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
