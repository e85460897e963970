use std::path::PathBuf;

use crate::subproblem::SubproblemSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dual ascent stopped after {iterations} iterations with stationarity {stationarity:.3e}")]
    MaxIterationsExceeded {
        iterations: usize,
        stationarity: f64,
        best: Box<SubproblemSolution>,
    },

    #[error("non-finite value in {0}")]
    NonFiniteValue(&'static str),

    #[error("backtracking diverged: ell = {ell:e} after {backtracks} increases")]
    BacktrackDiverged { backtracks: usize, ell: f64 },

    #[error("starting point is outside the domain of F")]
    InfeasibleStart,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("malformed record: {0}")]
    Parse(String),
}
