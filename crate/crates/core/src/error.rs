use thiserror::Error;

use crate::fourier::BasisLayout;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation order {0} is below the minimum of {min}", min = BasisLayout::MIN_ORDER)]
    OrderTooSmall(usize),

    #[error("grid size {grid} invalid for order {order}: need an even size of at least {needed}")]
    GridTooSmall {
        order: usize,
        grid: usize,
        needed: usize,
    },

    #[error("layout mismatch: expected order {expected}, got {found}")]
    LayoutMismatch { expected: usize, found: usize },

    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    #[error(
        "integration became unstable at step {step} (t = {time:.6}): non-finite state; \
         try a smaller time step than dt = {dt}"
    )]
    Unstable { step: usize, time: f64, dt: f64 },

    #[error(
        "CFL guard violated: dt*(N+1)*(|kappa|*sup|w|+1) = {value:.4} exceeds the bound {bound}"
    )]
    CflViolation { value: f64, bound: f64 },

    #[error(
        "eigensolver failed on a {dim}x{dim} block (frobenius norm {frobenius:.3e}, \
         max entry {max_entry:.3e})"
    )]
    EigenFailure {
        dim: usize,
        frobenius: f64,
        max_entry: f64,
    },

    #[error("matrix has {0} non-finite entries")]
    NonFiniteMatrix(usize),

    #[error("bad seed spec `{spec}`: {reason}")]
    SeedSpec { spec: String, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
