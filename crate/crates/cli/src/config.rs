//! Run configuration: a TOML file whose every key can be overridden with
//! `--set section.key=value`.

use std::path::{Path, PathBuf};
use std::time::Duration;

use risus_core::analytics::GroupBy;
use risus_core::classifier::TrainConfig;
use risus_core::lexicon::ResourcePaths;
use risus_core::lime::ExplainParams;
use risus_core::AnalysisConfig;
use serde::{Deserialize, Serialize};

pub const SCORER_ENDPOINT_ENV: &str = "RISUS_SCORER_ENDPOINT";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("override {0:?} is not key=value")]
    Override(String),
    #[error("{key}: path {path} does not exist")]
    MissingPath { key: &'static str, path: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResourceConfig {
    /// Directory with the standard layout; individual paths below override it.
    pub root: PathBuf,
    pub pronouncing: Option<PathBuf>,
    pub wordnet: Option<PathBuf>,
    pub sentiment: Option<PathBuf>,
    pub hyphenation: Option<PathBuf>,
    pub wordlists: Option<PathBuf>,
}

impl Default for ResourceConfig {
    fn default() -> Self {
        Self {
            root: PathBuf::from("resources"),
            pronouncing: None,
            wordnet: None,
            sentiment: None,
            hyphenation: None,
            wordlists: None,
        }
    }
}

impl ResourceConfig {
    pub fn paths(&self) -> ResourcePaths {
        let base = ResourcePaths::under(&self.root);
        ResourcePaths {
            pronouncing: self.pronouncing.clone().unwrap_or(base.pronouncing),
            wordnet: self.wordnet.clone().unwrap_or(base.wordnet),
            sentiment: self.sentiment.clone().unwrap_or(base.sentiment),
            hyphenation: self.hyphenation.clone().unwrap_or(base.hyphenation),
            wordlists: self.wordlists.clone().or(base.wordlists),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScorerConfig {
    /// Recorded response rows (JSONL). Used when no endpoint is set.
    pub fixture: Option<PathBuf>,
    pub endpoint: Option<String>,
    pub timeout_secs: u64,
    pub retries: u32,
    pub batch_size: usize,
    pub max_in_flight: usize,
}

impl Default for ScorerConfig {
    fn default() -> Self {
        Self {
            fixture: None,
            endpoint: None,
            timeout_secs: 30,
            retries: 2,
            batch_size: 16,
            max_in_flight: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    /// Saved baseline model. Without a model or endpoint, one is trained on the corpus labels.
    pub model: Option<PathBuf>,
    pub endpoint: Option<String>,
    pub timeout_secs: u64,
    pub retries: u32,
    pub batch_size: usize,
    pub train: TrainConfig,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            model: None,
            endpoint: None,
            timeout_secs: 60,
            retries: 2,
            batch_size: 64,
            train: TrainConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplainerConfig {
    pub n: usize,
    pub k: usize,
    pub lambda: f64,
    pub kernel_width: Option<f64>,
    pub seed: u64,
    /// Documents to explain; empty means all.
    pub ids: Vec<String>,
}

impl Default for ExplainerConfig {
    fn default() -> Self {
        let p = ExplainParams::default();
        Self {
            n: p.n,
            k: p.k,
            lambda: p.lambda,
            kernel_width: p.kernel_width,
            seed: p.seed,
            ids: Vec::new(),
        }
    }
}

impl ExplainerConfig {
    pub fn params(&self) -> ExplainParams {
        ExplainParams {
            target: None,
            k: self.k,
            n: self.n,
            seed: self.seed,
            lambda: self.lambda,
            kernel_width: self.kernel_width,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticsConfig {
    pub group_by: GroupBy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    pub resources: ResourceConfig,
    pub scorer: ScorerConfig,
    pub classifier: ClassifierConfig,
    pub explainer: ExplainerConfig,
    pub analysis: AnalysisConfig,
    pub analytics: AnalyticsConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("out"),
            resources: ResourceConfig::default(),
            scorer: ScorerConfig::default(),
            classifier: ClassifierConfig::default(),
            explainer: ExplainerConfig::default(),
            analysis: AnalysisConfig::default(),
            analytics: AnalyticsConfig::default(),
        }
    }
}

impl RunConfig {
    /// Reads `path` (or defaults), then applies `key=value` overrides in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                    path: p.display().to_string(),
                    source,
                })?;
                text.parse::<toml::Table>().map_err(|e| ConfigError::Parse(e.to_string()))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            let (key, raw) = o.split_once('=').ok_or_else(|| ConfigError::Override(o.clone()))?;
            set_path(&mut table, key.trim(), parse_value(raw.trim()))?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))
    }

    /// Applies the scorer endpoint environment override, if set.
    pub fn apply_env(&mut self) {
        if let Ok(endpoint) = std::env::var(SCORER_ENDPOINT_ENV) {
            if !endpoint.trim().is_empty() {
                self.scorer.endpoint = Some(endpoint.trim().to_string());
            }
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let exists = |key: &'static str, p: &Path| {
            if p.exists() {
                Ok(())
            } else {
                Err(ConfigError::MissingPath {
                    key,
                    path: p.display().to_string(),
                })
            }
        };
        let paths = self.resources.paths();
        exists("resources.pronouncing", &paths.pronouncing)?;
        exists("resources.wordnet", &paths.wordnet)?;
        exists("resources.sentiment", &paths.sentiment)?;
        exists("resources.hyphenation", &paths.hyphenation)?;
        if let Some(w) = &self.resources.wordlists {
            exists("resources.wordlists", w)?;
        }
        if let Some(f) = &self.scorer.fixture {
            exists("scorer.fixture", f)?;
        }
        if let Some(m) = &self.classifier.model {
            exists("classifier.model", m)?;
        }
        if self.classifier.model.is_some() && self.classifier.endpoint.is_some() {
            return Err(ConfigError::Invalid("set only one of classifier.model and classifier.endpoint".into()));
        }
        self.analysis.validate().map_err(|e| ConfigError::Invalid(format!("analysis.{e}")))?;
        let e = &self.explainer;
        if e.n < risus_core::lime::MIN_SAMPLES {
            return Err(ConfigError::Invalid(format!(
                "explainer.n = {} is below {}",
                e.n,
                risus_core::lime::MIN_SAMPLES
            )));
        }
        if e.k == 0 {
            return Err(ConfigError::Invalid("explainer.k must be at least 1".into()));
        }
        if !(e.lambda > 0.0 && e.lambda.is_finite()) {
            return Err(ConfigError::Invalid(format!("explainer.lambda = {} must be positive", e.lambda)));
        }
        if e.kernel_width.is_some_and(|w| !(w > 0.0 && w.is_finite())) {
            return Err(ConfigError::Invalid("explainer.kernel_width must be positive".into()));
        }
        if self.scorer.batch_size == 0 || self.classifier.batch_size == 0 {
            return Err(ConfigError::Invalid("batch sizes must be at least 1".into()));
        }
        Ok(())
    }

    pub fn scorer_timeout(&self) -> Duration {
        Duration::from_secs(self.scorer.timeout_secs)
    }

    pub fn classifier_timeout(&self) -> Duration {
        Duration::from_secs(self.classifier.timeout_secs)
    }

    /// Canonical JSON of the run-relevant settings. The output directory is
    /// excluded so the same run written elsewhere hashes the same.
    pub fn canonical_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        value.as_object_mut().expect("object").remove("output_dir");
        serde_json::to_string(&value).expect("value serializes")
    }
}

/// TOML literal if it parses as one (number, bool, array, quoted string), else a bare string.
fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn set_path(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), ConfigError> {
    let mut parts = key.split('.').peekable();
    let mut cur = table;
    while let Some(part) = parts.next() {
        if part.is_empty() {
            return Err(ConfigError::Override(key.to_string()));
        }
        if parts.peek().is_none() {
            cur.insert(part.to_string(), value);
            return Ok(());
        }
        let entry = cur
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::Parse(format!("{key}: {part} is not a table")))?;
    }
    Err(ConfigError::Override(key.to_string()))
}
