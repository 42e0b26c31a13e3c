use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("no command given: set `command = ...` or pass a subcommand (accuracy, regularity, stability, cfl, prop-tests)")]
    MissingCommand,

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("duplicate key `{0}`")]
    DuplicateKey(String),

    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("invalid value `{value}` for `{key}`: {msg}")]
    InvalidValue { key: String, value: String, msg: String },

    #[error("conflicting settings: {0}")]
    Conflict(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error(transparent)]
    Core(#[from] rkdg_core::Error),
}

impl CliError {
    /// 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }

    pub fn invalid_env(var: &str, value: &str) -> Self {
        CliError::invalid(var, value, "expected a positive integer")
    }

    pub(crate) fn invalid(key: &str, value: &str, msg: impl Into<String>) -> Self {
        CliError::InvalidValue {
            key: key.to_string(),
            value: value.to_string(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
