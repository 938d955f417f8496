//! Content digests used for run logs and model provenance.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{read_input_bytes, Result};

/// SHA-256 of a byte slice as lowercase hex.
pub fn bytes_digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in hash {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// SHA-256 of a file's contents as lowercase hex.
pub fn file_digest(path: &Path) -> Result<String> {
    Ok(bytes_digest(&read_input_bytes(path)?))
}
