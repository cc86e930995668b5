//! Reading input files with digests, and the CLI error type.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::report::{Record, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::FileNotFound(_) => "FileNotFound",
            CliError::Io { .. } => "Io",
            CliError::Parse { .. } => "ParseError",
            CliError::Invalid(_) => "InvalidInput",
        }
    }

    pub fn record(&self) -> Record {
        Record::new("error").field("kind", self.kind()).field("message", self)
    }

    pub fn parse(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Parse { path: path.to_owned(), message: e.to_string() }
    }
}

/// Reads `path`, recording its role and SHA-256 digest.
pub fn read(path: &Path, role: &str, report: &mut Report) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::FileNotFound(path.to_owned()),
        _ => CliError::Io { path: path.to_owned(), source: e },
    })?;
    report.push(Record::new("input").field("role", role).field("path", path.display()).field("sha256", sha256_hex(&bytes)));
    String::from_utf8(bytes).map_err(|e| CliError::parse(path, e))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
