//! Command-line pipeline for humour-style analysis: corpus ingestion,
//! feature extraction, baseline training, explanation, analytics and
//! report emission, with a reproducibility manifest per run.

pub mod config;
pub mod corpus;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod tables;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use risus_core::analytics::PredictionRecord;
use risus_core::lime::Explanation;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::{ConfigError, RunConfig};
use crate::corpus::{Corpus, CorpusFormat, IngestError};
use crate::manifest::{sha256_hex, FileDigest, Manifest};
use crate::pipeline::{analyse, Analytics, DocFailure, Runner};
use crate::report::ReportSummary;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 1,
            RunError::Runtime(_) => 2,
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Validation(e.to_string())
    }
}

impl From<IngestError> for RunError {
    fn from(e: IngestError) -> Self {
        RunError::Validation(e.to_string())
    }
}

pub const EXIT_PARTIAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Features,
    Train,
    Explain,
    Analyze,
    All,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Features => "features",
            Command::Train => "train",
            Command::Explain => "explain",
            Command::Analyze => "analyze",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// 0 uses one thread per core.
    pub jobs: usize,
    pub fail_fast: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub documents: usize,
    pub failures: Vec<DocFailure>,
    pub manifest_sha256: String,
    pub artifacts: BTreeMap<String, String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            EXIT_PARTIAL
        }
    }
}

/// Artifact writer that remembers each file's digest.
struct Output {
    dir: PathBuf,
    artifacts: BTreeMap<String, String>,
}

impl Output {
    fn create(dir: &Path) -> Result<Self, RunError> {
        std::fs::create_dir_all(dir).map_err(|e| RunError::Runtime(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            artifacts: BTreeMap::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), RunError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| RunError::Runtime(format!("{}: {e}", parent.display())))?;
        }
        std::fs::write(&path, bytes).map_err(|e| RunError::Runtime(format!("{}: {e}", path.display())))?;
        self.artifacts.insert(name.to_string(), sha256_hex(bytes));
        Ok(())
    }

    fn finish(self, mut manifest: Manifest) -> Result<(String, BTreeMap<String, String>), RunError> {
        manifest.artifacts.extend(self.artifacts);
        let bytes = manifest.to_bytes();
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, &bytes).map_err(|e| RunError::Runtime(format!("{}: {e}", path.display())))?;
        Ok((sha256_hex(&bytes), manifest.artifacts))
    }
}

pub fn to_jsonl<T: Serialize>(items: &[T]) -> Vec<u8> {
    let mut out = Vec::new();
    for item in items {
        serde_json::to_writer(&mut out, item).expect("row serializes");
        out.push(b'\n');
    }
    out
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Validation(format!("{}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| RunError::Validation(format!("{}:{}: {e}", path.display(), i + 1)))
        })
        .collect()
}

fn pretty<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("value serializes");
    bytes.push(b'\n');
    bytes
}

pub fn load_corpus(path: &Path, format: Option<CorpusFormat>) -> Result<Corpus, RunError> {
    Ok(corpus::ingest(path, format)?)
}

fn write_tables(out: &mut Output, a: &Analytics) -> Result<(), RunError> {
    out.write("tables/complexity.csv", &tables::complexity_table(&a.stats))?;
    out.write("tables/emotions.csv", &tables::emotion_table(&a.stats))?;
    out.write("tables/affect.csv", &tables::affect_table(&a.stats))?;
    out.write("tables/errors.csv", &tables::error_table(&a.taxonomy))?;
    out.write("tables/confusion.csv", &tables::confusion_table(&a.taxonomy.confusion))?;
    out.write("tables/descriptives.csv", &tables::descriptives_table(&a.stats))?;
    if let Some(m) = &a.pearson {
        out.write("tables/correlations_pearson.csv", &tables::correlation_table(m))?;
    }
    if let Some(m) = &a.spearman {
        out.write("tables/correlations_spearman.csv", &tables::correlation_table(m))?;
    }
    out.write("analytics.json", &pretty(a))?;
    out.write("taxonomy.json", &pretty(&a.taxonomy))?;
    Ok(())
}

/// Ingests the corpus and runs `command` over it, writing artifacts and a manifest to the
/// configured output directory.
pub fn run(
    command: Command,
    corpus_path: &Path,
    format: Option<CorpusFormat>,
    config: &RunConfig,
    options: RunOptions,
) -> Result<Outcome, RunError> {
    let corpus = load_corpus(corpus_path, format)?;
    config.validate()?;
    let docs = corpus.documents();
    let mut manifest = Manifest::new(command.as_str(), config)?;
    manifest.inputs.insert("corpus".to_string(), FileDigest::of(corpus_path)?);
    let mut runner = Runner::new(config, options.jobs, options.fail_fast)?;
    let mut out = Output::create(&config.output_dir)?;

    if command == Command::Train {
        let model = pipeline::train(&docs, config)?;
        out.write("model.json", model.to_json().as_bytes())?;
        out.write("training.json", &pretty(&model.training_meta))?;
    } else if command == Command::Explain {
        let resolved = runner.classifier(&docs)?;
        let eligible: BTreeSet<&str> = docs.iter().map(|d| d.id.as_str()).collect();
        let explanations = runner.explain(&docs, &eligible, resolved.classifier.as_ref())?;
        out.write("explanations.jsonl", &to_jsonl(&explanations))?;
        out.write("errors.jsonl", &to_jsonl(&runner.failures))?;
    } else {
        let lex = runner.load_lexicons()?;
        let rows = runner.features(&docs, &lex)?;
        let kept: Vec<_> = rows.iter().flatten().cloned().collect();
        out.write("features.jsonl", &to_jsonl(&kept))?;
        if command != Command::Features {
            let resolved = runner.classifier(&docs)?;
            if let Some(model) = &resolved.trained {
                out.write("model.json", model.to_json().as_bytes())?;
                out.write("training.json", &pretty(&model.training_meta))?;
            }
            let records = runner.predict(&docs, &rows, resolved.classifier.as_ref())?;
            if records.is_empty() {
                return Err(RunError::Runtime("every document failed before classification".into()));
            }
            out.write("predictions.jsonl", &to_jsonl(&records))?;
            let analytics = analyse(&records, config.analytics.group_by)?;
            write_tables(&mut out, &analytics)?;
            if command == Command::All {
                let eligible: BTreeSet<&str> = records.iter().map(|r| r.doc_id.as_str()).collect();
                let explanations = runner.explain(&docs, &eligible, resolved.classifier.as_ref())?;
                out.write("explanations.jsonl", &to_jsonl(&explanations))?;
                let summary = ReportSummary {
                    documents: docs.len(),
                    failures: runner.failures.len(),
                };
                let html = report::render(&summary, &records, &explanations, &analytics)
                    .map_err(|e| RunError::Runtime(e.to_string()))?;
                out.write("report.html", html.as_bytes())?;
            }
        }
        out.write("errors.jsonl", &to_jsonl(&runner.failures))?;
    }

    manifest.documents = docs.len();
    manifest.failures = runner.failures.len();
    let (manifest_sha256, artifacts) = out.finish(manifest)?;
    Ok(Outcome {
        documents: docs.len(),
        failures: runner.failures,
        manifest_sha256,
        artifacts,
    })
}

/// Renders `report.html` from the predictions and explanations already in
/// the output directory, and adds it to the manifest there.
pub fn report_from_dir(config: &RunConfig) -> Result<Outcome, RunError> {
    let dir = &config.output_dir;
    let records: Vec<PredictionRecord> = read_jsonl(&dir.join("predictions.jsonl"))?;
    if records.is_empty() {
        return Err(RunError::Validation(format!("{}: no predictions", dir.display())));
    }
    let explanations_path = dir.join("explanations.jsonl");
    let explanations: Vec<Explanation> = if explanations_path.exists() {
        read_jsonl(&explanations_path)?
    } else {
        Vec::new()
    };
    let failures: Vec<DocFailure> = match dir.join("errors.jsonl") {
        p if p.exists() => read_jsonl(&p)?,
        _ => Vec::new(),
    };
    let manifest_path = dir.join("manifest.json");
    let mut manifest: Manifest = match std::fs::read(&manifest_path) {
        Ok(bytes) => serde_json::from_slice(&bytes)
            .map_err(|e| RunError::Validation(format!("{}: {e}", manifest_path.display())))?,
        Err(_) => {
            let mut m = Manifest::new("report", config)?;
            m.documents = records.len() + failures.iter().map(|f| &f.doc_id).collect::<BTreeSet<_>>().len();
            m.failures = failures.len();
            m
        }
    };
    let analytics = analyse(&records, config.analytics.group_by)?;
    let summary = ReportSummary {
        documents: manifest.documents,
        failures: manifest.failures,
    };
    let html = report::render(&summary, &records, &explanations, &analytics).map_err(|e| RunError::Validation(e.to_string()))?;
    let mut out = Output::create(dir)?;
    out.write("report.html", html.as_bytes())?;
    manifest.artifacts.remove("report.html");
    let (manifest_sha256, artifacts) = out.finish(manifest)?;
    Ok(Outcome {
        documents: summary.documents,
        failures,
        manifest_sha256,
        artifacts,
    })
}
