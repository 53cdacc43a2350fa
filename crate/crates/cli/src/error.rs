use std::fmt;

use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    Core(beg_core::Error),
    Usage(String),
    Io(String),
    EmptyReport,
    /// The run finished but a checked relation failed.
    Violations(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::EmptyReport => 2,
            CliError::Core(beg_core::Error::Parse(_)) => 2,
            CliError::Core(beg_core::Error::Domain(_) | beg_core::Error::NoRoot { .. }) => 3,
            CliError::Core(beg_core::Error::Budget { .. }) => 4,
            CliError::Core(beg_core::Error::Invariant(_)) | CliError::Violations(_) => 5,
            CliError::Io(_) => 6,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) | CliError::EmptyReport => "usage",
            CliError::Core(beg_core::Error::Parse(_)) => "parse",
            CliError::Core(beg_core::Error::Domain(_) | beg_core::Error::NoRoot { .. }) => "domain",
            CliError::Core(beg_core::Error::Budget { .. }) => "budget",
            CliError::Core(beg_core::Error::Invariant(_)) | CliError::Violations(_) => "invariant",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON record for the diagnostic stream.
    pub fn record(&self) -> String {
        let details = match self {
            CliError::Violations(v) => v.clone(),
            _ => Vec::new(),
        };
        json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
            "details": details,
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::EmptyReport => f.write_str("the report has no rows; pass --allow-empty to write it anyway"),
            CliError::Violations(v) => write!(f, "{} checked relation(s) failed", v.len()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<beg_core::Error> for CliError {
    fn from(e: beg_core::Error) -> Self {
        CliError::Core(e)
    }
}
