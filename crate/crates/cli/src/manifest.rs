//! Run manifests: everything needed to reproduce an output bit for bit
//! within this tool.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::stream_io::write_atomic;

pub struct RunManifest {
    pub command: String,
    pub seed: u64,
    /// Where the seed came from: `--seed`, `PHOTONSTAT_SEED` or the config.
    pub seed_source: &'static str,
    /// Fully resolved configuration, `key = value` lines.
    pub resolved_config: String,
    /// `(label, path, sha256)` for inputs and outputs.
    pub file_digests: Vec<(String, String, String)>,
    pub wall_clock_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tool: photonstat {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "seed: {} (from {})", self.seed, self.seed_source);
        let _ = writeln!(out, "wall_clock_ms: {}", self.wall_clock_ms);
        for (label, path, digest) in &self.file_digests {
            let _ = writeln!(out, "{label}: {path} sha256={digest}");
        }
        let _ = writeln!(out, "config:");
        for line in self.resolved_config.lines() {
            let _ = writeln!(out, "  {line}");
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_atomic(path, self.render().as_bytes())
    }
}
