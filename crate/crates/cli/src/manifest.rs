//! Run manifest: the resolved configuration, input digests, seed and
//! artifact paths of one run — enough to reproduce it bit-for-bit on the
//! same inputs.

use std::collections::BTreeMap;
use std::path::Path;

use mvrs::config::RunConfig;
use mvrs::hash::fnv1a64;
use mvrs::{Error, Result};
use serde::Serialize;

#[derive(Serialize)]
pub struct RunManifest {
    pub library_version: String,
    pub command: String,
    pub seed: u64,
    pub inputs: BTreeMap<String, String>,
    pub artifacts: BTreeMap<String, String>,
    pub duration_seconds: f64,
    /// Fully resolved configuration (flags already folded in); re-running
    /// the command with this config and the same inputs reproduces every
    /// artifact byte-for-byte.
    pub config: RunConfig,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, config: RunConfig) -> Self {
        RunManifest {
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            inputs: BTreeMap::new(),
            artifacts: BTreeMap::new(),
            duration_seconds: 0.0,
            config,
        }
    }

    /// Records an input file with its content digest.
    pub fn add_input(&mut self, name: &str, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        self.inputs.insert(
            name.to_string(),
            format!("{} fnv1a64:{:016x}", path.display(), fnv1a64(&bytes)),
        );
        Ok(())
    }

    pub fn add_artifact(&mut self, name: &str, path: &Path) {
        self.artifacts
            .insert(name.to_string(), path.display().to_string());
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("manifest serialization: {e}")))?;
        std::fs::write(path, text)?;
        Ok(())
    }
}
