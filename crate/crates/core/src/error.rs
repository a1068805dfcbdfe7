use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric: |a[{row},{col}] - a[{col},{row}]| = {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("duplicate entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("index ({row}, {col}) out of range for {rows}x{cols}")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("{solver} did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("NaN encountered in {0}")]
    NotANumber(&'static str),

    #[error("dense eigensolver cap exceeded: n = {n} > {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("negative edge weight {weight} at ({row}, {col})")]
    NegativeWeight { row: usize, col: usize, weight: f64 },

    #[error("nonzero diagonal {value} at node {node}")]
    NonzeroDiagonal { node: usize, value: f64 },

    #[error("graph is disconnected after {attempts} attempts")]
    Disconnected { attempts: usize },

    #[error("budget {budget} exceeds pool of {pool} candidates")]
    BudgetExceedsPool { budget: usize, pool: usize },

    #[error("sampling step {step}: {source}")]
    SamplingStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("sampled basis is rank deficient: rank {rank} < {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::SamplingStep {
            step,
            source: Box::new(self),
        }
    }
}
