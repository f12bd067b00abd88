use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the transform library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("malformed RIFF/WAVE file {}: {reason}", path.display())]
    MalformedWav { path: PathBuf, reason: String },

    #[error("unsupported encoding in {}: {detail} (only 16-bit integer PCM is accepted)", path.display())]
    UnsupportedEncoding { path: PathBuf, detail: String },

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("impulse position {position} out of range for length {length}")]
    PositionOutOfRange { position: usize, length: usize },

    #[error("frequency {freq_hz} Hz is at or above Nyquist for sample rate {sample_rate_hz} Hz")]
    AboveNyquist { freq_hz: f64, sample_rate_hz: u32 },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid transform config: {0}")]
    InvalidConfig(String),

    #[error("unsupported wavelet {0:?} (only \"morl\" is available)")]
    UnsupportedWavelet(String),

    #[error("invalid image spec: {0}")]
    InvalidImage(String),

    #[error("malformed raw matrix: {0}")]
    MalformedRaw(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("png encoding failed: {0}")]
    Png(#[from] png::EncodingError),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
