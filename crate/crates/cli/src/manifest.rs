//! Experiment manifest: one JSON file at the output root recording what was
//! run and the content hash of every artifact. Dependent stages verify their
//! inputs against it, so editing an upstream file by hand invalidates the
//! chain instead of silently corrupting results.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use equigoal_core::collect::CollectionKind;
use equigoal_core::env::EnvConfig;
use equigoal_core::evaluate::TestConfig;
use equigoal_core::learn::TrainConfig;

use crate::failure::{CliResult, Failure};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollectionRecord {
    pub kind: CollectionKind,
    pub episodes: usize,
    pub horizon: usize,
    pub noise_start: f64,
    pub noise_end: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactRecord {
    /// Which subcommand produced the file.
    pub stage: String,
    /// Content hash of the file as written.
    pub sha256: String,
    /// Hash chained over the stage parameters and all input hashes.
    pub provenance: String,
    /// Paths of the inputs the stage consumed.
    pub inputs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Manifest {
    pub name: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env_config: Option<EnvConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collection: Option<CollectionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub train_configs: BTreeMap<String, TrainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_config: Option<TestConfig>,
    #[serde(default)]
    pub artifacts: BTreeMap<String, ArtifactRecord>,
}

impl Manifest {
    pub fn path_in(root: &Path) -> PathBuf {
        root.join(MANIFEST_FILE)
    }

    pub fn load_or_new(root: &Path, name: &str) -> CliResult<Self> {
        let path = Self::path_in(root);
        if path.exists() {
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::data(format!("{}: bad manifest: {e}", path.display())))
        } else {
            Ok(Manifest {
                name: name.to_string(),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                ..Manifest::default()
            })
        }
    }

    pub fn save(&self, root: &Path) -> CliResult<()> {
        let path = Self::path_in(root);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)
                .map_err(|e| Failure::config(format!("cannot create {}: {e}", dir.display())))?;
        }
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(&path, text)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))
    }

    /// Hash an input file and, if the manifest already tracks it as some
    /// stage's output, require the recorded hash to match.
    pub fn verify_input(&self, path: &Path) -> CliResult<String> {
        let hash = sha256_file(path)?;
        let key = path.to_string_lossy();
        if let Some(rec) = self.artifacts.get(key.as_ref()) {
            if rec.sha256 != hash {
                return Err(Failure::data(format!(
                    "{}: content changed since the {} stage recorded it; rerun upstream",
                    path.display(),
                    rec.stage
                )));
            }
        }
        Ok(hash)
    }

    /// Record a freshly written artifact (hashing it as written).
    pub fn record_output(
        &mut self,
        path: &Path,
        stage: &str,
        provenance: &str,
        inputs: &[String],
    ) -> CliResult<()> {
        let hash = sha256_file(path)?;
        self.artifacts.insert(
            path.to_string_lossy().into_owned(),
            ArtifactRecord {
                stage: stage.to_string(),
                sha256: hash,
                provenance: provenance.to_string(),
                inputs: inputs.to_vec(),
            },
        );
        Ok(())
    }
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))?;
    Ok(sha256_hex(&bytes))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Provenance hash for a stage's outputs: tool version, the command, its
/// parameters, and the hashes of everything it read, in a fixed order.
pub fn provenance(cmd: &str, params: &str, input_hashes: &[&str]) -> String {
    let mut joined = format!("equigoal {}\n{cmd}\n{params}\n", env!("CARGO_PKG_VERSION"));
    for h in input_hashes {
        joined.push_str(h);
        joined.push('\n');
    }
    sha256_hex(joined.as_bytes())
}
