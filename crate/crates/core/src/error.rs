//! Error types shared by every module in the crate.

use std::path::{Path, PathBuf};

/// Any failure surfaced by a fallible operation in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or internally inconsistent input data.
    #[error("data error: {0}")]
    Data(String),
    /// An underlying I/O failure while reading or writing a file.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// The caller violated an operation's contract.
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True when the error came from bad input data rather than caller misuse.
    pub fn is_data(&self) -> bool {
        matches!(self, Error::Data(_))
    }
}

/// Reads an input file, reporting a missing file as a data error so callers
/// can distinguish "bad input" from caller misuse.
pub(crate) fn read_input(path: &Path) -> Result<String> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(text),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(Error::data(format!("missing file {}", path.display())))
        }
        Err(e) => Err(Error::io(path, e)),
    }
}

/// Reads a binary input file with the same missing-file policy as `read_input`.
pub(crate) fn read_input_bytes(path: &Path) -> Result<Vec<u8>> {
    match std::fs::read(path) {
        Ok(bytes) => Ok(bytes),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(Error::data(format!("missing file {}", path.display())))
        }
        Err(e) => Err(Error::io(path, e)),
    }
}

pub(crate) fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
