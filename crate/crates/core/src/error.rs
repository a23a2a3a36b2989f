use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("integration diverged at step {step} (t = {time})")]
    Divergence { step: u64, time: f64 },

    #[error("time series has no channel named `{0}`")]
    ChannelMissing(String),

    #[error("need at least {needed} post-transient samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("spectra do not share a frequency grid and window")]
    GridMismatch,

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("need at least {needed} sweep points with eps/A < {limit}, got {got}")]
    InsufficientPoints { needed: usize, got: usize, limit: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Divergence { .. } => 2,
            _ => 1,
        }
    }
}
