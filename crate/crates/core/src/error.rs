use thiserror::Error;

/// Errors raised by the graph store and snapshot codec.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown entity `{0}`")]
    UnknownEntity(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("edge `{edge}` references missing entity `{entity}`")]
    DanglingEndpoint { edge: String, entity: String },

    #[error("interval start is after end")]
    InvalidInterval,

    #[error("ordering comparison involves an unknown timestamp")]
    UnknownOrdering,

    #[error("duplicate edge identity (source={subject}, relation={relation}, target={object})")]
    DuplicateEdge {
        subject: String,
        relation: String,
        object: String,
    },

    #[error("schema conflict for relation `{0}`: exclusive flag is immutable")]
    SchemaConflict(String),

    #[error("snapshot parse error at line {line}: {message}")]
    SnapshotParse { line: usize, message: String },

    #[error("index audit failed: {0}")]
    AuditFailure(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CoreError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CoreError::Validation(msg.into())
    }
}
