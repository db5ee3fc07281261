//! Support for the acceptance suite: the bundled data and the command line
//! binary of the `growth-optimal` package.
//!
//! The suite lives in its own package so that `cargo test --workspace` runs it
//! after every test target of the library.

use std::path::{Path, PathBuf};

/// Overrides the location of the `growth-optimal` binary.
pub const BIN_ENV: &str = "GROWTH_OPTIMAL_BIN";

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

/// The `growth-optimal` binary: `$GROWTH_OPTIMAL_BIN` if set, otherwise the
/// one cargo placed next to the running test's `deps` directory.
pub fn cli_binary() -> Result<PathBuf, String> {
    if let Some(p) = std::env::var_os(BIN_ENV) {
        return Ok(PathBuf::from(p));
    }
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let profile_dir = exe
        .parent()
        .and_then(Path::parent)
        .ok_or_else(|| format!("unexpected test executable location {}", exe.display()))?;
    let bin = profile_dir.join(format!("growth-optimal{}", std::env::consts::EXE_SUFFIX));
    if bin.is_file() {
        Ok(bin)
    } else {
        Err(format!(
            "{} not found; build it with `cargo build -p growth-optimal` or run `cargo test --workspace`",
            bin.display()
        ))
    }
}
