use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum GswError {
    #[error(transparent)]
    Core(#[from] gsw_core::Error),
    #[error("invalid simulation setup: {0}")]
    Setup(String),
    #[error("solution blew up at t = {time}")]
    BlowUp { time: f64 },
    #[error("tail frequency {frequency} is above 2/3 of the Nyquist wavenumber {limit}; refine the grid")]
    Unresolved { frequency: f64, limit: f64 },
    #[error("tail window {window:?}: {reason}")]
    Window { window: (f64, f64), reason: &'static str },
    #[error("radiated front would wrap into the measurement window: front travels {front}, allowed {allowed}")]
    Wrap { front: f64, allowed: f64 },
    #[error("{path}:{line}: {reason}")]
    Config {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Regime(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GswError {
    /// Process exit status: 2 for bad invocations, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            GswError::Usage(_) | GswError::Config { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        GswError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, GswError>;
