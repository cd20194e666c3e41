//! CSV tables and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{GswError, Result};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "GSW_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "gsw-output";

/// Round-trip formatting: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text with a header line, one line per row.
pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| GswError::io(path, e))?;
    f.write_all(csv_string(header, rows).as_bytes())
        .map_err(|e| GswError::io(path, e))
}

/// Explicit flag, then the environment variable, then `fallback`.
pub fn resolve_output_dir(flag: Option<&Path>, fallback: Option<&str>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| fallback.map(PathBuf::from))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| GswError::io(dir, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    /// Seconds.
    pub wall_time: f64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time: 0.0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    /// `manifest-<command>.json` in `dir`; returns its path.
    pub fn write(&mut self, dir: &Path, elapsed: Duration) -> Result<PathBuf> {
        self.wall_time = elapsed.as_secs_f64();
        let path = dir.join(format!("manifest-{}.json", self.command));
        let text = serde_json::to_string_pretty(self)?;
        fs::write(&path, text).map_err(|e| GswError::io(&path, e))?;
        Ok(path)
    }
}
