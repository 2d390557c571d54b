use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulator core.
#[derive(Debug, Error)]
pub enum IsacError {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("payload of {requested} bits exceeds frame capacity of {capacity} bits")]
    Capacity { requested: usize, capacity: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("front-end response of channel {channel} too weak at bin {bin} (|H| = {magnitude:.3e})")]
    Calibration { channel: usize, bin: usize, magnitude: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("channel model error: {0}")]
    Model(String),

    #[error("preamble not found (best timing metric {metric:.3})")]
    PreambleNotFound { metric: f64 },

    #[error("synchronization failure: correlation peak {peak_db:.1} dB above floor, need {threshold_db:.1} dB")]
    SyncFailure { peak_db: f64, threshold_db: f64 },

    #[error("framing error: {0}")]
    Framing(String),

    #[error("insufficient pilots: {available} available, {required} required")]
    InsufficientPilots { available: usize, required: usize },

    #[error("pilot at subcarrier {subcarrier}, symbol {symbol} has zero transmit value")]
    DegeneratePilot { subcarrier: usize, symbol: usize },

    #[error("profile has no unique peak")]
    NoPeak,

    #[error("degenerate image: {0}")]
    DegenerateImage(String),

    #[error("reference peak power must be positive")]
    ZeroReference,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl IsacError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IsacError::Io { path: path.into(), source }
    }

    /// True for errors caused by user-supplied configuration rather than by a
    /// simulated trial going wrong.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            IsacError::Configuration(_) | IsacError::Argument(_) | IsacError::Serialization(_)
        )
    }
}

impl From<serde_json::Error> for IsacError {
    fn from(e: serde_json::Error) -> Self {
        IsacError::Serialization(e.to_string())
    }
}

pub type Result<T, E = IsacError> = std::result::Result<T, E>;
