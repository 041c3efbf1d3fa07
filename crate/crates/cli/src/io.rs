use std::fs;
use std::io::Write;
use std::path::Path;

use strayeval_core::{decode_mask, encode_mask, BinaryMask};

use crate::error::{CliError, CliResult};

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn read_mask(path: &Path) -> CliResult<BinaryMask> {
    let bytes = read_bytes(path)?;
    decode_mask(&bytes).map_err(|e| CliError::from_core(path, e))
}

pub fn write_mask(path: &Path, mask: &BinaryMask) -> CliResult<()> {
    let bytes = encode_mask(mask).map_err(|e| CliError::from_core(path, e))?;
    write_file(path, &bytes)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn emit_json(path: Option<&Path>, value: &serde_json::Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    emit(path, text.as_bytes())
}
