//! Locating fixture data and assembling the Schur index provider.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use kzq_core::rational::SchurProvider;

pub const DATA_DIR_VAR: &str = "KZQ_DATA_DIR";

/// `$KZQ_DATA_DIR`, or the data directory of the source tree.
pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_VAR) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data"),
    }
}

/// `*.schur` files under `<data>/schur`, except the built-in `core.schur`,
/// sorted by name.
pub fn fixture_files(data: &Path) -> Result<Vec<PathBuf>> {
    let dir = data.join("schur");
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for entry in std::fs::read_dir(&dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        let is_schur = path.extension().is_some_and(|e| e == "schur");
        if is_schur && path.file_name().is_some_and(|n| n != "core.schur") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Built-in data, then the fixture directory, then explicit files.
pub fn provider(data: &Path, extra: &[PathBuf]) -> Result<SchurProvider> {
    let mut p = SchurProvider::core();
    for path in fixture_files(data)?.iter().chain(extra) {
        p.load_file(path)?;
    }
    Ok(p)
}
