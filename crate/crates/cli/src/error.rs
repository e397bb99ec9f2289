//! CLI error type carrying a stable machine-readable kind.

use std::fmt;

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn parse(line: usize, message: impl fmt::Display) -> Self {
        Self::new("parse-error", format!("line {line}: {message}"))
    }

    pub fn invalid_config(message: impl fmt::Display) -> Self {
        Self::new("invalid-config", message.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<meanpart_core::Error> for CliError {
    fn from(e: meanpart_core::Error) -> Self {
        Self::new(e.kind(), e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new("io", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::new("invalid-json", e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
