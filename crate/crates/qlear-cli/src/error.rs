//! Command-level error type and its mapping onto stable exit codes.

use std::path::PathBuf;

/// Anything a command can fail with, classified for the exit-code contract:
/// usage problems exit 1, data and file problems exit 2, numeric failures
/// inside the classifier exit 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A flag value that is wrong regardless of any input data.
    #[error("{0}")]
    Usage(String),

    /// A library error surfaced as-is.
    #[error(transparent)]
    Lib(#[from] qlear::Error),

    /// A library error with a note about what the command was doing.
    #[error("{context}")]
    Context {
        context: String,
        #[source]
        source: qlear::Error,
    },

    /// A file could not be read or written.
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A JSON file (model or grid config) did not parse or validate.
    #[error("{}: invalid JSON: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    /// A file parsed but its content is unusable.
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },

    /// Writing an output stream or CSV failed.
    #[error("failed to write output: {0}")]
    Output(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Lib(source) | CliError::Context { source, .. } if is_numeric(source) => 3,
            _ => 2,
        }
    }
}

/// Failures of the numeric core, as opposed to bad input data.
fn is_numeric(err: &qlear::Error) -> bool {
    match err {
        qlear::Error::EigensolverFailure
        | qlear::Error::ZeroTrace
        | qlear::Error::NotPositiveSemidefinite { .. } => true,
        qlear::Error::SampleFailed { source, .. } => is_numeric(source),
        _ => false,
    }
}
