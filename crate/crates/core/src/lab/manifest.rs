use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::command::Command;
use crate::error::Result;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// How the random streams of a run were assigned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Streams {
    /// Human-readable rule, e.g. `sample i -> stream i`.
    pub scheme: String,
    pub first: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    /// Path relative to the output directory.
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

impl Artifact {
    pub fn of(dir: &Path, file: &str) -> Result<Self> {
        let data = std::fs::read(dir.join(file))?;
        Ok(Artifact { file: file.to_string(), sha256: hex::encode(Sha256::digest(&data)), bytes: data.len() as u64 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Toolchain {
    pub package_version: String,
    pub rustc: String,
    pub target: String,
    pub debug_assertions: bool,
}

impl Toolchain {
    pub fn current() -> Self {
        Toolchain {
            package_version: env!("CARGO_PKG_VERSION").into(),
            rustc: env!("CHROMLAB_RUSTC").into(),
            target: env!("CHROMLAB_TARGET").into(),
            debug_assertions: cfg!(debug_assertions),
        }
    }
}

/// Everything needed to rerun an experiment and check its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub schema_version: u32,
    pub experiment: String,
    pub params: Command,
    /// Per-solve budget; part of the parameters because exhaustion is recorded.
    pub budget_ms: u64,
    pub master_seed: Option<u64>,
    pub streams: Option<Streams>,
    pub threads: usize,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub artifacts: Vec<Artifact>,
    pub toolchain: Toolchain,
}

impl ExperimentManifest {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

pub(crate) fn unix_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}
