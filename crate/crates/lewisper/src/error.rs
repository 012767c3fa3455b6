use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("no N <= {bound} with T^N = 1")]
    OrderNotFound { bound: usize },
    #[error("representation invalid: {0}")]
    InvalidRep(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("index {k} out of range (max {max})")]
    Range { k: usize, max: usize },
    #[error("precision loss: {msg} (estimate {estimate:e})")]
    Precision { msg: String, estimate: f64 },
    #[error("divergent regime: {0}")]
    Divergent(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("ill-conditioned system (condition estimate {0:e})")]
    Conditioning(f64),
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not a transfer eigenfunction: residual {0:e}")]
    NotEigenfunction(f64),
    #[error("discretization not converged: top eigenvalue drift {drift:e}")]
    NotConverged {
        drift: f64,
        coarse: Vec<num_complex::Complex64>,
        fine: Vec<num_complex::Complex64>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
