//! Self-describing output files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

/// Envelope written around every JSON result.
#[derive(Serialize)]
pub struct Artifact<'a, C: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: String,
    pub command: &'a str,
    pub config: &'a C,
    pub seeds: Vec<u64>,
    pub tolerances: BTreeMap<&'static str, f64>,
    /// CSV files written next to this artifact, relative to the output directory.
    pub files: Vec<String>,
    pub result: R,
}

impl<'a, C: Serialize, R: Serialize> Artifact<'a, C, R> {
    pub fn new(command: &'a str, config: &'a C, result: R) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: "airylab",
            version: version(),
            command,
            config,
            seeds: Vec::new(),
            tolerances: BTreeMap::new(),
            files: Vec::new(),
            result,
        }
    }

    pub fn seeds(mut self, seeds: Vec<u64>) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn tolerance(mut self, name: &'static str, value: f64) -> Self {
        self.tolerances.insert(name, value);
        self
    }

    pub fn file(mut self, name: &str) -> Self {
        self.files.push(name.to_string());
        self
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// Output directory; created on first write.
pub struct OutDir(pub PathBuf);

impl OutDir {
    pub fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn write(&self, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.0).map_err(|e| io_err(&self.0, e))?;
        let p = self.path(name);
        fs::write(&p, contents).map_err(|e| io_err(&p, e))?;
        Ok(p)
    }
}

pub fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
