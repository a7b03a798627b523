use std::path::PathBuf;

use thiserror::Error;

/// Errors raised when building domain values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidValue {
    #[error("concept name is empty")]
    EmptyConcept,
    #[error("concept name {0:?} contains a tab, newline or NUL")]
    ConceptControlChar(String),
    #[error("association type {0} is not one of +-1..+-4")]
    TypeOutOfRange(i64),
    #[error("association alias is empty")]
    EmptyAlias,
    #[error("association alias {0:?} contains a tab or newline")]
    AliasControlChar(String),
    #[error("context phrase is empty")]
    EmptyPhrase,
    #[error("context phrase {0:?} contains '|', a tab or a newline")]
    PhraseReservedChar(String),
    #[error("knowledge tuples must carry a forward type, got {0}")]
    InverseTupleType(i8),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SanitizeError {
    #[error("concept name is empty")]
    Empty,
    #[error("concept name {0:?} contains both '!' and '/' and cannot be stored unambiguously")]
    Ambiguous(String),
    #[error("concept name {0:?} contains a NUL byte")]
    Nul(String),
    #[error("concept name {0:?} is not a valid path component")]
    Reserved(String),
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Layout { path: PathBuf, message: String },
    #[error(transparent)]
    Sanitize(#[from] SanitizeError),
}

impl StoreError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        StoreError::Io {
            path: path.into(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AliasError {
    #[error("unknown association alias `{name}` (known: {})", known.join(", "))]
    Unknown { name: String, known: Vec<String> },
}

/// Parse and conversion failures from the ingest formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("{file}:{line}: {message}")]
    Syntax {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{file}:{line}: {source}")]
    Alias {
        file: String,
        line: usize,
        #[source]
        source: AliasError,
    },
    #[error("{file}:{line}: {source}")]
    Value {
        file: String,
        line: usize,
        #[source]
        source: InvalidValue,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no such concept: {0:?}")]
    NoSuchConcept(String),
    #[error("ambiguous concept {prefix:?}, candidates: {}", candidates.join(", "))]
    Ambiguous {
        prefix: String,
        candidates: Vec<String>,
    },
    #[error("bounded search needs an end concept")]
    MissingEnd,
    #[error("max depth must be at least 1")]
    ZeroDepth,
    #[error("type filter {0} is not in 1..=4")]
    BadTypeFilter(u8),
    #[error("relevance threshold {0} is above 100")]
    BadThreshold(u8),
}
