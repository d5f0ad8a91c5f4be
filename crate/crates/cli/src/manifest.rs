use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Serialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Phase {
    pub name: String,
    pub seconds: f64,
}

/// What a run read, wrote and how long each phase took.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    pub phases: Vec<Phase>,
    #[serde(skip)]
    clock: Option<(String, Instant)>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
            phases: Vec::new(),
            clock: None,
        }
    }

    pub fn input(&mut self, path: &Path) -> anyhow::Result<Vec<u8>> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(FileHash { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        Ok(bytes)
    }

    /// Starts timing a phase, closing the previous one.
    pub fn phase(&mut self, name: &str) {
        self.close();
        self.clock = Some((name.into(), Instant::now()));
    }

    fn close(&mut self) {
        if let Some((name, t)) = self.clock.take() {
            self.phases.push(Phase { name, seconds: t.elapsed().as_secs_f64() });
        }
    }

    pub fn write(&mut self, path: PathBuf, bytes: &[u8]) -> anyhow::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(FileHash { path: path.display().to_string(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    /// Writes `manifest.json` into `dir`.
    pub fn finish(mut self, dir: &Path) -> anyhow::Result<()> {
        self.close();
        let text = serde_json::to_string_pretty(&self)?;
        std::fs::write(dir.join("manifest.json"), text + "\n").context("writing manifest")?;
        Ok(())
    }
}
