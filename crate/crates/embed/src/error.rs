use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("duplicate index key `{0}`")]
    DuplicateKey(String),

    #[error("transport error: {0}")]
    Transport(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl EmbedError {
    pub fn validation(msg: impl Into<String>) -> Self {
        EmbedError::Validation(msg.into())
    }
}
