//! Pipeline stages: features, classification, explanation and analytics.
//! Stages fan out per document on a bounded pool and merge in corpus order,
//! so the thread count never changes output bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use risus_core::affective::{fetch_affect_scores_each, FixtureScorer, HttpScorer, ScorerBackend};
use risus_core::analytics::{
    chi_square_association, correlation_matrix, error_polarity_table, error_taxonomy, feature_columns,
    kruskal_wallis, style_descriptives, ChiSquareResult, CorrelationMatrix, CorrelationMethod, ErrorPolarityTable,
    ErrorTaxonomy, GroupBy, PredictionRecord, StyleStats, TargetFlags, TestResult,
};
use risus_core::classifier::{BaselineModel, Classifier, ProbabilityVector, RemoteClassifier};
use risus_core::features::{analyse_document, FeatureProfile, NumericFeature};
use risus_core::lexicon::Lexicons;
use risus_core::lime::{explain, Explanation};
use risus_core::{Document, HumourStyle};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Score,
    Features,
    Predict,
    Explain,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Score => "score",
            Stage::Features => "features",
            Stage::Predict => "predict",
            Stage::Explain => "explain",
        };
        f.write_str(s)
    }
}

/// A per-document error; the run continues unless fail-fast is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocFailure {
    pub doc_id: String,
    pub stage: Stage,
    pub message: String,
}

impl DocFailure {
    fn new(doc_id: &str, stage: Stage, err: impl fmt::Display) -> Self {
        Self {
            doc_id: doc_id.to_string(),
            stage,
            message: err.to_string(),
        }
    }
}

/// One line of `features.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub doc_id: String,
    pub features: FeatureProfile,
    pub targets: TargetFlags,
}

pub struct Runner<'a> {
    pub config: &'a RunConfig,
    pub pool: rayon::ThreadPool,
    pub fail_fast: bool,
    pub failures: Vec<DocFailure>,
}

impl<'a> Runner<'a> {
    /// `jobs = 0` uses one thread per core.
    pub fn new(config: &'a RunConfig, jobs: usize, fail_fast: bool) -> Result<Self, RunError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| RunError::Runtime(e.to_string()))?;
        Ok(Self {
            config,
            pool,
            fail_fast,
            failures: Vec::new(),
        })
    }

    fn record(&mut self, failure: DocFailure) -> Result<(), RunError> {
        if self.fail_fast {
            return Err(RunError::Runtime(format!(
                "{} [{}]: {}",
                failure.doc_id, failure.stage, failure.message
            )));
        }
        self.failures.push(failure);
        Ok(())
    }

    pub fn load_lexicons(&self) -> Result<Lexicons, RunError> {
        let (lex, warnings) =
            Lexicons::load(&self.config.resources.paths()).map_err(|e| RunError::Runtime(e.to_string()))?;
        if !warnings.is_empty() {
            eprintln!("resources loaded with {} warning(s)", warnings.len());
        }
        Ok(lex)
    }

    fn scorer(&self) -> Result<Box<dyn ScorerBackend>, RunError> {
        let s = &self.config.scorer;
        if let Some(endpoint) = &s.endpoint {
            return Ok(Box::new(HttpScorer::new(endpoint.clone(), self.config.scorer_timeout(), s.retries)));
        }
        let path = s.fixture.as_ref().ok_or_else(|| {
            RunError::Validation(format!(
                "set scorer.fixture or scorer.endpoint (or {})",
                crate::config::SCORER_ENDPOINT_ENV
            ))
        })?;
        let fixture = FixtureScorer::load(path).map_err(|e| RunError::Validation(format!("scorer fixture: {e}")))?;
        Ok(Box::new(fixture))
    }

    /// Feature rows in corpus order; `None` where the document failed.
    pub fn features(&mut self, docs: &[Document], lex: &Lexicons) -> Result<Vec<Option<FeatureRow>>, RunError> {
        let scorer = self.scorer()?;
        let s = &self.config.scorer;
        let scores = fetch_affect_scores_each(docs, scorer.as_ref(), s.batch_size, s.max_in_flight)
            .map_err(|e| RunError::Runtime(format!("scorer: {e}")))?;
        let analysis = &self.config.analysis;
        let results: Vec<Result<FeatureRow, DocFailure>> = self.pool.install(|| {
            docs.par_iter()
                .zip(scores.par_iter())
                .map(|(doc, row)| {
                    let row = row.as_ref().map_err(|e| DocFailure::new(&doc.id, Stage::Score, e))?;
                    let (features, targets) =
                        analyse_document(doc, row, lex, analysis).map_err(|e| DocFailure::new(&doc.id, Stage::Features, e))?;
                    Ok(FeatureRow {
                        doc_id: doc.id.clone(),
                        features,
                        targets,
                    })
                })
                .collect()
        });
        let mut out = Vec::with_capacity(results.len());
        for r in results {
            match r {
                Ok(row) => out.push(Some(row)),
                Err(f) => {
                    self.record(f)?;
                    out.push(None);
                }
            }
        }
        Ok(out)
    }

    /// The configured model or endpoint, or a baseline trained on the corpus labels.
    pub fn classifier(&self, docs: &[Document]) -> Result<ResolvedClassifier, RunError> {
        let c = &self.config.classifier;
        if let Some(endpoint) = &c.endpoint {
            return Ok(ResolvedClassifier {
                classifier: Box::new(RemoteClassifier::new(
                    endpoint.clone(),
                    self.config.classifier_timeout(),
                    c.retries,
                    c.batch_size,
                )),
                trained: None,
            });
        }
        if let Some(path) = &c.model {
            let text = std::fs::read_to_string(path).map_err(|e| RunError::Validation(format!("{}: {e}", path.display())))?;
            let model = BaselineModel::from_json(&text).map_err(|e| RunError::Validation(format!("{}: {e}", path.display())))?;
            return Ok(ResolvedClassifier {
                classifier: Box::new(model),
                trained: None,
            });
        }
        let model = train(docs, self.config)?;
        Ok(ResolvedClassifier {
            classifier: Box::new(model.clone()),
            trained: Some(model),
        })
    }

    pub fn predict(
        &mut self,
        docs: &[Document],
        rows: &[Option<FeatureRow>],
        classifier: &dyn Classifier,
    ) -> Result<Vec<PredictionRecord>, RunError> {
        let kept: Vec<(&Document, &FeatureRow)> =
            docs.iter().zip(rows).filter_map(|(d, r)| r.as_ref().map(|r| (d, r))).collect();
        let texts: Vec<String> = kept.iter().map(|(d, _)| d.raw_text.clone()).collect();
        let probs: Vec<ProbabilityVector> = if texts.is_empty() {
            Vec::new()
        } else {
            classifier
                .predict_proba(&texts)
                .map_err(|e| RunError::Runtime(format!("classifier: {e}")))?
        };
        if probs.len() != kept.len() {
            return Err(RunError::Runtime(format!(
                "classifier returned {} predictions for {} texts",
                probs.len(),
                kept.len()
            )));
        }
        Ok(kept
            .into_iter()
            .zip(probs)
            .map(|((doc, row), p)| PredictionRecord::new(&doc.id, doc.gold_label, p, row.features.clone(), row.targets))
            .collect())
    }

    /// Explains the configured ids (all when empty) among `eligible`.
    pub fn explain(
        &mut self,
        docs: &[Document],
        eligible: &BTreeSet<&str>,
        classifier: &dyn Classifier,
    ) -> Result<Vec<Explanation>, RunError> {
        let wanted = &self.config.explainer.ids;
        let known: BTreeSet<&str> = docs.iter().map(|d| d.id.as_str()).collect();
        let unknown: Vec<&str> = wanted.iter().map(String::as_str).filter(|id| !known.contains(id)).collect();
        if !unknown.is_empty() {
            return Err(RunError::Validation(format!("explainer.ids not in corpus: {}", unknown.join(", "))));
        }
        let targets: Vec<&Document> = docs
            .iter()
            .filter(|d| eligible.contains(d.id.as_str()))
            .filter(|d| wanted.is_empty() || wanted.contains(&d.id))
            .collect();
        let params = self.config.explainer.params();
        let results: Vec<Result<Explanation, DocFailure>> = self.pool.install(|| {
            targets
                .par_iter()
                .map(|doc| explain(doc, classifier, &params).map_err(|e| DocFailure::new(&doc.id, Stage::Explain, e)))
                .collect()
        });
        let mut out = Vec::new();
        for r in results {
            match r {
                Ok(e) => out.push(e),
                Err(f) => self.record(f)?,
            }
        }
        Ok(out)
    }
}

pub struct ResolvedClassifier {
    pub classifier: Box<dyn Classifier>,
    /// Set when the model was trained during this run.
    pub trained: Option<BaselineModel>,
}

pub fn train(docs: &[Document], config: &RunConfig) -> Result<BaselineModel, RunError> {
    BaselineModel::train(docs, &config.classifier.train).map_err(|e| {
        RunError::Validation(format!(
            "no classifier.model or classifier.endpoint configured and training on the corpus failed: {e}"
        ))
    })
}

/// A statistical test that may be skipped when its preconditions fail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl<T> TestOutcome<T> {
    fn from_result<E: fmt::Display>(r: Result<T, E>) -> Self {
        match r {
            Ok(result) => Self {
                result: Some(result),
                skipped: None,
            },
            Err(e) => Self {
                result: None,
                skipped: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarityAssociation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<ErrorPolarityTable>,
    pub test: TestOutcome<ChiSquareResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analytics {
    pub stats: StyleStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pearson: Option<CorrelationMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spearman: Option<CorrelationMatrix>,
    /// Numeric feature (and `confidence`) by style group.
    pub kruskal_wallis: BTreeMap<String, TestOutcome<TestResult>>,
    pub error_polarity: PolarityAssociation,
    pub taxonomy: ErrorTaxonomy,
}

pub fn analyse(records: &[PredictionRecord], group_by: GroupBy) -> Result<Analytics, RunError> {
    let stats = style_descriptives(records, group_by).map_err(|e| RunError::Validation(e.to_string()))?;
    let names: Vec<String> = NumericFeature::MECHANISMS.iter().map(|f| f.as_str().to_string()).collect();
    let columns = feature_columns(records, &NumericFeature::MECHANISMS);
    let matrix = |m| correlation_matrix(&names, &columns, m).ok();

    let label = |r: &PredictionRecord| match group_by {
        GroupBy::Predicted => Some(r.predicted_label),
        GroupBy::Gold => r.gold_label,
    };
    let grouped = |value: &dyn Fn(&PredictionRecord) -> f64| -> Vec<Vec<f64>> {
        let mut by: BTreeMap<HumourStyle, Vec<f64>> = BTreeMap::new();
        for r in records {
            if let Some(s) = label(r) {
                by.entry(s).or_default().push(value(r));
            }
        }
        by.into_values().collect()
    };
    let mut kruskal = BTreeMap::new();
    kruskal.insert(
        "confidence".to_string(),
        TestOutcome::from_result(kruskal_wallis(&grouped(&|r| r.confidence))),
    );
    for f in NumericFeature::ALL {
        let groups = grouped(&|r| f.value(&r.features));
        kruskal.insert(f.as_str().to_string(), TestOutcome::from_result(kruskal_wallis(&groups)));
    }

    let table = error_polarity_table(records);
    let test = match &table {
        Some(t) => TestOutcome::from_result(chi_square_association(&t.counts)),
        None => TestOutcome {
            result: None,
            skipped: Some("fewer than 2 error types or polarity signs".into()),
        },
    };
    Ok(Analytics {
        stats,
        pearson: matrix(CorrelationMethod::Pearson),
        spearman: matrix(CorrelationMethod::Spearman),
        kruskal_wallis: kruskal,
        error_polarity: PolarityAssociation { table, test },
        taxonomy: error_taxonomy(records),
    })
}
