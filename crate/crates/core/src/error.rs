use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Variants fall in two families that the command line maps to distinct exit
/// codes: malformed input (2) and degenerate numerics or geometry (3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    /// `frame` is the 1-based frame number, as shown to users.
    #[error("parse error at frame {frame}: {message}")]
    ParseAt { frame: usize, message: String },

    #[error("unsupported format version {found:?} (expected {expected:?})")]
    Version { found: String, expected: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("audio: {0}")]
    Audio(String),

    #[error("image: {0}")]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code associated with this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Degenerate(_) | Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}

impl From<hound::Error> for Error {
    fn from(err: hound::Error) -> Self {
        Error::Audio(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
