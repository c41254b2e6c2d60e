//! Library side of the command-line front-end: text formats for systems,
//! specifications, reports, controllers and traces, plus SVG rendering.
//! The binary in `main.rs` wires these into subcommands.
//!
//! All files are deterministic: exact rationals, stable ordering, no
//! timestamps. Writes go through a temp-file-and-rename so readers never
//! observe partial output.

pub mod error;
pub mod formats;
pub mod render;

use std::path::Path;

/// Atomic file write: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), error::CliError> {
    let tmp = path.with_extension(format!(
        "{}tmp{}",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default(),
        std::process::id()
    ));
    let write = || -> std::io::Result<()> {
        std::fs::write(&tmp, contents)?;
        std::fs::rename(&tmp, path)
    };
    write().map_err(|e| error::CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}
