use crate::DocId;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no documents")]
    NoDocuments,

    #[error("duplicate document id {0}")]
    DuplicateDocId(DocId),

    #[error("token {token:?} is not indexed for document {doc_id}")]
    UnknownTerm { doc_id: DocId, token: String },

    #[error("unknown document id {0}")]
    UnknownDoc(DocId),

    #[error("cannot split {docs} documents into {shards} shards")]
    TooManyShards { docs: usize, shards: usize },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("invalid threshold schedule: {0}")]
    Schedule(String),

    #[error("invalid cost matrix: {0}")]
    Costs(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed message at byte {offset}: {message}")]
    Message { offset: usize, message: String },

    #[error("wire protocol: {0}")]
    Wire(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
