use paretoscope_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{key}`: {message}")]
    Validation { key: String, message: String },
    #[error("{command} needs {requirement}")]
    MissingField { command: String, requirement: String },
    #[error("{context}: {source}")]
    Engine {
        context: String,
        #[source]
        source: CoreError,
    },
}

impl CliError {
    pub fn engine(context: impl Into<String>, source: CoreError) -> Self {
        CliError::Engine {
            context: context.into(),
            source,
        }
    }

    /// 1 for bad input, 2 for engine failures, 3 when the scan cap is hit.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine {
                source: CoreError::CapExceeded { .. },
                ..
            } => 3,
            CliError::Engine { .. } => 2,
            _ => 1,
        }
    }
}
