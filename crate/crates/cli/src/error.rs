//! Structured diagnostics.  Every failure the driver can hit ends up as one
//! of these and is printed as JSON, never as a panic.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CliError {
    /// Malformed JSON, with the position reported by the parser.
    #[error("{path}:{line}:{column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    /// Well-formed JSON whose content is rejected, located by a field path
    /// such as `bracket[2].value[0].coeff`.
    #[error("{path}: {field}: {message}")]
    Field { path: String, field: String, message: String },
    /// The bundle is valid but lacks what the command needs.
    #[error("precondition: {message}")]
    Precondition { message: String },
    #[error("{message}")]
    Library { message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn field(path: &str, field: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError::Field { path: path.into(), field: field.into(), message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> CliError {
        CliError::Precondition { message: message.into() }
    }

    /// `{"error": {...}}`, pretty-printed.
    pub fn to_json(&self) -> String {
        let v = serde_json::json!({ "ok": false, "error": self });
        serde_json::to_string_pretty(&v).expect("plain data")
    }
}

impl From<derived_brackets::Error> for CliError {
    fn from(e: derived_brackets::Error) -> Self {
        CliError::Library { message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
