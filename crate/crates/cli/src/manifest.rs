//! Run manifest: everything needed to reproduce and verify a run.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::RunError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_file(path: &Path) -> Result<String, RunError> {
    let bytes = std::fs::read(path).map_err(|e| RunError::Runtime(format!("{}: {e}", path.display())))?;
    Ok(sha256_hex(&bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path) -> Result<Self, RunError> {
        Ok(Self {
            path: path.display().to_string(),
            sha256: sha256_file(path)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub explainer: u64,
    pub train: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub config: serde_json::Value,
    pub seeds: Seeds,
    pub inputs: BTreeMap<String, FileDigest>,
    pub resources: Vec<FileDigest>,
    /// Output-relative artifact path to its digest.
    pub artifacts: BTreeMap<String, String>,
    pub documents: usize,
    pub failures: usize,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfig) -> Result<Self, RunError> {
        let canonical = config.canonical_json();
        let mut inputs = BTreeMap::new();
        if let Some(f) = &config.scorer.fixture {
            if config.scorer.endpoint.is_none() {
                inputs.insert("scorer_fixture".to_string(), FileDigest::of(f)?);
            }
        }
        if let Some(m) = &config.classifier.model {
            inputs.insert("classifier_model".to_string(), FileDigest::of(m)?);
        }
        Ok(Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_sha256: sha256_hex(canonical.as_bytes()),
            config: serde_json::from_str(&canonical).expect("canonical config is JSON"),
            seeds: Seeds {
                explainer: config.explainer.seed,
                train: config.classifier.train.seed,
            },
            inputs,
            resources: resource_digests(config)?,
            artifacts: BTreeMap::new(),
            documents: 0,
            failures: 0,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("manifest serializes");
        bytes.push(b'\n');
        bytes
    }
}

/// Every resource file, sorted by path.
fn resource_digests(config: &RunConfig) -> Result<Vec<FileDigest>, RunError> {
    let paths = config.resources.paths();
    let mut files: Vec<PathBuf> = Vec::new();
    for p in [&paths.pronouncing, &paths.wordnet, &paths.sentiment, &paths.hyphenation]
        .into_iter()
        .chain(paths.wordlists.as_ref())
    {
        collect_files(p, &mut files)?;
    }
    files.sort();
    files.dedup();
    files.iter().map(|f| FileDigest::of(f)).collect()
}

fn collect_files(path: &Path, out: &mut Vec<PathBuf>) -> Result<(), RunError> {
    if path.is_file() {
        out.push(path.to_path_buf());
    } else if path.is_dir() {
        let entries = std::fs::read_dir(path).map_err(|e| RunError::Runtime(format!("{}: {e}", path.display())))?;
        for entry in entries {
            let entry = entry.map_err(|e| RunError::Runtime(e.to_string()))?;
            collect_files(&entry.path(), out)?;
        }
    }
    Ok(())
}
