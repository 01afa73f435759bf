use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error kinds raised by the library.
///
/// `InvalidInput` and `Incompatible` describe bad user data; `Singular` and
/// `Internal` describe numerical failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("incompatible data: {0}")]
    Incompatible(String),

    #[error("singular system (mode {mode:?}): pivot {pivot} of {size} below threshold")]
    Singular {
        mode: Option<i64>,
        pivot: usize,
        size: usize,
    },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for errors caused by user-supplied configuration or data.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Incompatible(_))
    }

    pub(crate) fn with_mode(self, k: i64) -> Self {
        match self {
            Error::Singular { pivot, size, .. } => Error::Singular {
                mode: Some(k),
                pivot,
                size,
            },
            other => other,
        }
    }
}
