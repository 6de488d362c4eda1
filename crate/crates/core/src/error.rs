use num_complex::Complex64;
use thiserror::Error;

use crate::spectral::Classification;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix has dimension 0")]
    EmptyMatrix,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("Hamiltonian is {classification}, evolution requires a real diagonalizable spectrum; eigenvalues: {}", format_eigenvalues(.eigenvalues))]
    NotPseudoHermitian {
        classification: Classification,
        eigenvalues: Vec<Complex64>,
    },

    #[error("PageRank did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("initial state has zero time-averaged probability")]
    ZeroProbability,

    #[error("zero matrix has no scaled singular value decomposition")]
    ZeroMatrix,

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("entry {index} = {value} lies outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },

    #[error("matrix does not match a known fixture expansion")]
    NotAFixture,

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigenvalue iteration did not converge")]
    EigenFailure,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

fn format_eigenvalues(values: &[Complex64]) -> String {
    values
        .iter()
        .map(|z| {
            if z.im.abs() < 1e-12 {
                format!("{:.6}", z.re)
            } else {
                format!("{:.6}{:+.6}i", z.re, z.im)
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}
