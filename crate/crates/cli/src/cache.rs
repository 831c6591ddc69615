//! File cache of command outputs, keyed by a hash of the run configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// What a command printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// One file per (command, shape, seed); the suffix is a content hash of
    /// the full configuration so distinct settings never collide.
    pub fn path(&self, command: &str, shape: &str, seed: u64, key: &str) -> PathBuf {
        let digest = hex::encode(Sha256::digest(key.as_bytes()));
        self.dir.join(format!("{command}-{shape}-seed{seed}-{}.json", &digest[..16]))
    }

    pub fn load(&self, path: &Path) -> Option<Outcome> {
        let text = fs::read_to_string(path).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place so readers never see a partial file.
    pub fn store(&self, path: &Path, outcome: &Outcome) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(outcome)?.as_bytes())?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}
