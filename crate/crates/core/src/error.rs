use crate::model::ValidationReport;
use std::io;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("facade tree violates the meta-model: {0}")]
    InvalidTree(ValidationReport),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("input is not valid {charset}")]
    Decode { charset: String },

    #[error("CSV error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Csv { line: Option<u64>, message: String },

    #[error("JSON error at byte {offset}: {message}")]
    Json { offset: usize, message: String },

    #[error("XML error at byte {position}: {message}")]
    Xml { position: u64, message: String },

    #[error("cannot extract image metadata: {0}")]
    Metadata(String),

    #[error("no triplifier registered for media type {0}")]
    UnsupportedMediaType(String),

    #[error("invalid service IRI: {0}")]
    ServiceUri(String),

    #[error("cannot fetch {location}: {cause}")]
    Fetch { location: String, cause: String },

    #[error("cannot fetch {location}: HTTP status {status}")]
    HttpStatus { location: String, status: u16 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("SPARQL syntax error: {0}")]
    Syntax(String),

    #[error("SERVICE <{iri}> failed: {source}")]
    Service {
        iri: String,
        #[source]
        source: Box<Error>,
    },

    #[error("federated SERVICE <{0}> rejected: federation is disabled")]
    FederationDisabled(String),

    #[error("query evaluation failed: {0}")]
    Evaluation(#[from] spareval::QueryEvaluationError),

    #[error("{0}")]
    Serialization(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Innermost error below any `SERVICE` wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Service { source, .. } => source.root_cause(),
            other => other,
        }
    }
}
