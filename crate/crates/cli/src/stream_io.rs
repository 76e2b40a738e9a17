//! Click-stream files.
//!
//! Binary form (`PCS1`): magic bytes `PCS1`, then little-endian u64
//! `record_length_ns`, u64 `count`, followed by `count` little-endian u64
//! timestamps in nondecreasing order. Text form: first line
//! `# record_length_ns=<n>`, then one decimal nanosecond timestamp per line.
//! Readers sniff the magic to pick the format.

use std::fs;
use std::io::Write;
use std::path::Path;

use photonstat_core::{ClickStream, StreamError, Time};

use crate::error::CliError;

pub const MAGIC: &[u8; 4] = b"PCS1";

/// Writes `bytes` to `path` atomically: a temporary file in the same
/// directory is renamed over the destination only after a complete write, so
/// failures never leave a partial output behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
        .map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn write_binary(path: &Path, stream: &ClickStream) -> Result<(), CliError> {
    let mut bytes = Vec::with_capacity(20 + 8 * stream.len());
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&(stream.record_length().as_ns() as u64).to_le_bytes());
    bytes.extend_from_slice(&(stream.len() as u64).to_le_bytes());
    for &t in stream.timestamps() {
        bytes.extend_from_slice(&(t.as_ns() as u64).to_le_bytes());
    }
    write_atomic(path, &bytes)
}

pub fn write_text(path: &Path, stream: &ClickStream) -> Result<(), CliError> {
    let mut text = format!("# record_length_ns={}\n", stream.record_length().as_ns());
    for &t in stream.timestamps() {
        text.push_str(&t.as_ns().to_string());
        text.push('\n');
    }
    write_atomic(path, text.as_bytes())
}

fn stream_error_detail(err: StreamError, what: &str) -> String {
    match err {
        StreamError::Unsorted { index } => {
            format!("{what} {index} is earlier than its predecessor")
        }
        StreamError::OutOfRange { index } => {
            format!("{what} {index} lies outside [0, record_length)")
        }
        StreamError::RecordLengthMismatch { .. } => "record length mismatch".into(),
    }
}

fn read_binary(path: &Path, bytes: &[u8]) -> Result<ClickStream, CliError> {
    let err = |detail: String| CliError::parse(path, detail);
    if bytes.len() < 20 {
        return Err(err("truncated header (need 20 bytes)".into()));
    }
    let u64_at =
        |offset: usize| u64::from_le_bytes(bytes[offset..offset + 8].try_into().expect("8 bytes"));
    let record_ns = u64_at(4);
    let count = u64_at(12);
    let expected_len = (count as u128) * 8 + 20;
    if bytes.len() as u128 != expected_len {
        return Err(err(format!(
            "expected {expected_len} bytes for {count} timestamps, found {}",
            bytes.len()
        )));
    }
    if record_ns > i64::MAX as u64 {
        return Err(err("record_length_ns does not fit a signed time".into()));
    }
    let mut timestamps = Vec::with_capacity(count as usize);
    for i in 0..count as usize {
        let raw = u64_at(20 + 8 * i);
        if raw > i64::MAX as u64 {
            return Err(err(format!("timestamp {i} does not fit a signed time")));
        }
        timestamps.push(Time::from_ns(raw as i64));
    }
    ClickStream::new(timestamps, Time::from_ns(record_ns as i64))
        .map_err(|e| err(stream_error_detail(e, "timestamp")))
}

fn read_text(path: &Path, text: &str) -> Result<ClickStream, CliError> {
    let err = |line: usize, detail: String| CliError::parse(path, format!("line {line}: {detail}"));
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let record_ns: i64 = header
        .strip_prefix("# record_length_ns=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(1, "expected '# record_length_ns=<n>'".into()))?;
    let mut timestamps = Vec::new();
    for (index, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let t: i64 = line
            .parse()
            .map_err(|_| err(index + 1, format!("'{line}' is not a timestamp")))?;
        timestamps.push(Time::from_ns(t));
    }
    ClickStream::new(timestamps, Time::from_ns(record_ns))
        .map_err(|e| CliError::parse(path, stream_error_detail(e, "timestamp on data line")))
}

/// Reads either format, sniffing the binary magic.
pub fn read_stream(path: &Path) -> Result<ClickStream, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    if bytes.starts_with(MAGIC) {
        read_binary(path, &bytes)
    } else {
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| CliError::parse(path, "neither PCS1 binary nor text format"))?;
        read_text(path, text)
    }
}
