//! Deterministic file emission: shortest round-trip float formatting and
//! atomic write-to-temp-then-rename.

use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Shortest decimal representation that round-trips; `Display` for f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Write `content` to `path` atomically: a temp file in the target
/// directory is persisted over the destination only once fully written, so
/// failures never leave a partial file.
pub fn write_atomic(path: &Path, content: &str) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(content.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("cannot persist {}: {e}", path.display())))?;
    Ok(())
}

/// Emit to the output path, or stdout when no path is configured.
pub fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Join cells into one CSV row.
pub fn csv_row<I: IntoIterator<Item = String>>(cells: I) -> String {
    cells.into_iter().collect::<Vec<_>>().join(",")
}
