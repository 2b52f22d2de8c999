use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition of a state-changing operation was violated. This is a
    /// program bug, never a simulation outcome.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("graph is disconnected: node {0} unreachable from node 0")]
    Disconnected(usize),

    #[error("graph text line {line}: {msg}")]
    GraphFormat { line: usize, msg: String },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("need at least 2 run reports to aggregate, got {0}")]
    TooFewReports(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {msg}")]
    CsvContent { path: PathBuf, msg: String },
}
