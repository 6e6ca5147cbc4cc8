use thiserror::Error;

use crate::fiber::ScanTrace;

/// Errors raised by the solver toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid domain or grid configuration; `axis` names the offending axis when there is one.
    #[error("configuration error{}: {message}", axis.map(|a| format!(" on axis {a}")).unwrap_or_default())]
    Config { axis: Option<usize>, message: String },

    /// A scalar parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Inputs do not satisfy a structural contract (sizes, grids, finiteness).
    #[error("contract error: {0}")]
    Contract(String),

    /// The fiber map of the zero field is undefined.
    #[error("degenerate direction: the field is identically zero")]
    DegenerateDirection,

    /// The fiber slope never changed sign, so the functional lacks mountain-pass geometry
    /// along this direction.
    #[error("hypothesis violation: {message}")]
    HypothesisViolation { message: String, trace: ScanTrace },

    /// Radial shooting could not bracket a profile.
    #[error("oracle failure: {0}")]
    Oracle(String),

    /// Every multi-start run failed.
    #[error("all {} runs failed: {}", statuses.len(), statuses.join("; "))]
    AllRunsFailed { statuses: Vec<String> },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(axis: impl Into<Option<usize>>, message: impl Into<String>) -> Self {
        Error::Config {
            axis: axis.into(),
            message: message.into(),
        }
    }
}
