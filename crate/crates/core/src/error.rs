use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = PcfError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum PcfError {
    /// Requested graph would not fit the index type or the memory budget.
    #[error("size error: {0}")]
    Size(String),
    #[error("invalid graph: {0}")]
    Validation(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// Caller broke an input contract (mismatched sizes, wrong topology kind).
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("state space too large: {0}")]
    Capacity(String),
    #[error("quadrature failed to converge on [{lo}, {hi}]: estimate {estimate:e}, error {error:e}")]
    Quadrature {
        lo: f64,
        hi: f64,
        estimate: f64,
        error: f64,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bracket error: {0}")]
    Bracket(String),
    #[error("parse error in {path:?} line {line}: {message}")]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PcfError {
    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            PcfError::Parameter(_) | PcfError::Parse { .. } => 2,
            PcfError::Size(_) | PcfError::Capacity(_) => 3,
            PcfError::Validation(_) | PcfError::Contract(_) => 4,
            PcfError::Quadrature { .. } | PcfError::Domain(_) => 5,
            PcfError::Bracket(_) => 6,
            PcfError::Io(_) => 7,
        }
    }
}
