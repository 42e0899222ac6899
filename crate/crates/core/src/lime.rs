//! Local surrogate explanations: remove word types at random, query the
//! classifier, and fit a proximity-weighted ridge regression on the masks.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{Classifier, ClassifierError};
use crate::style::HumourStyle;
use crate::text::{normalize_whitespace, Document, TokenKind};

#[derive(Debug, thiserror::Error)]
pub enum LimeError {
    #[error("nothing to perturb: the text has {0} distinct word(s), at least 2 are needed")]
    NothingToPerturb(usize),
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("ridge penalty must be positive, got {0}")]
    InvalidLambda(f64),
    #[error("kernel width must be positive, got {0}")]
    InvalidKernelWidth(f64),
    #[error("no variation: every perturbation mask is identical")]
    NoVariation,
    #[error("masks, targets and proximities differ in length or mask width")]
    ShapeMismatch,
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
}

pub const MIN_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSample {
    /// One entry per distinct word feature; `true` keeps the word.
    pub mask: Vec<bool>,
    pub text: String,
    pub proximity: f64,
}

/// Distinct lowercase non-punctuation token types in first-occurrence order.
pub fn word_features(doc: &Document) -> Vec<String> {
    let mut seen = BTreeSet::new();
    doc.tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Punct && seen.insert(t.lower.as_str()))
        .map(|t| t.lower.clone())
        .collect()
}

/// The document text with every token of a masked-out word type removed.
pub fn reconstruct(doc: &Document, features: &[String], mask: &[bool]) -> String {
    let removed: BTreeSet<&str> = features
        .iter()
        .zip(mask)
        .filter(|(_, keep)| !**keep)
        .map(|(w, _)| w.as_str())
        .collect();
    let mut out = String::with_capacity(doc.raw_text.len());
    let mut cursor = 0;
    for t in doc.tokens.iter().filter(|t| removed.contains(t.lower.as_str())) {
        out.push_str(&doc.raw_text[cursor..t.span.start]);
        out.push(' ');
        cursor = t.span.end;
    }
    out.push_str(&doc.raw_text[cursor..]);
    normalize_whitespace(&out)
}

pub fn default_kernel_width(features: usize) -> f64 {
    0.25 * (features as f64).sqrt()
}

/// `exp(−D²/w²)` with `D` the cosine distance between `mask` and the all-ones vector.
pub fn proximity_weight(mask: &[bool], kernel_width: f64) -> f64 {
    let d = mask.len() as f64;
    let kept = mask.iter().filter(|k| **k).count() as f64;
    let distance = if kept == 0.0 { 1.0 } else { 1.0 - (kept / d).sqrt() };
    (-(distance * distance) / (kernel_width * kernel_width)).exp()
}

/// Sample 0 is the unperturbed document; the others remove a uniformly
/// chosen number of word types (1 to d−1), then a uniform subset of that size.
pub fn perturb_samples(
    doc: &Document,
    n: usize,
    seed: u64,
    kernel_width: Option<f64>,
) -> Result<Vec<PerturbationSample>, LimeError> {
    let features = word_features(doc);
    let d = features.len();
    if d < 2 {
        return Err(LimeError::NothingToPerturb(d));
    }
    if n < MIN_SAMPLES {
        return Err(LimeError::TooFewSamples { got: n, min: MIN_SAMPLES });
    }
    let width = kernel_width.unwrap_or_else(|| default_kernel_width(d));
    if width.is_nan() || width <= 0.0 {
        return Err(LimeError::InvalidKernelWidth(width));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut masks = vec![vec![true; d]];
    for _ in 1..n {
        let remove = rng.gen_range(1..d);
        let mut mask = vec![true; d];
        for i in sample(&mut rng, d, remove) {
            mask[i] = false;
        }
        masks.push(mask);
    }
    Ok(masks
        .into_iter()
        .map(|mask| PerturbationSample {
            text: reconstruct(doc, &features, &mask),
            proximity: proximity_weight(&mask, width),
            mask,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Surrogate {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub r2: f64,
}

/// Minimizes `Σ πᵢ (yᵢ − w·xᵢ − b)² + λ|w|²` with an unpenalized intercept.
///
/// R² is the weighted coefficient of determination, clamped to [0, 1] and
/// defined as 1 when the targets have no weighted variance.
pub fn fit_local_surrogate(masks: &[Vec<bool>], targets: &[f64], proximities: &[f64], lambda: f64) -> Result<Surrogate, LimeError> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(LimeError::InvalidLambda(lambda));
    }
    let n = masks.len();
    let d = masks.first().map_or(0, Vec::len);
    if targets.len() != n || proximities.len() != n || masks.iter().any(|m| m.len() != d) {
        return Err(LimeError::ShapeMismatch);
    }
    if n < d + 1 {
        return Err(LimeError::TooFewSamples { got: n, min: d + 1 });
    }
    if masks.iter().all(|m| m == &masks[0]) {
        return Err(LimeError::NoVariation);
    }
    if targets.iter().all(|&t| t == targets[0]) {
        return Ok(Surrogate {
            weights: vec![0.0; d],
            intercept: targets[0],
            r2: 1.0,
        });
    }
    let x = DMatrix::from_fn(n, d, |i, j| f64::from(u8::from(masks[i][j])));
    let y = DVector::from_column_slice(targets);
    let pi = DVector::from_column_slice(proximities);
    let total: f64 = pi.sum();
    let x_mean: DVector<f64> = (x.transpose() * &pi) / total;
    let y_mean = pi.dot(&y) / total;

    let mut xc = x.clone();
    for mut row in xc.row_iter_mut() {
        row -= x_mean.transpose();
    }
    let yc = y.add_scalar(-y_mean);
    let mut xw = xc.clone();
    for (i, mut row) in xw.row_iter_mut().enumerate() {
        row *= pi[i];
    }
    let gram = xw.transpose() * &xc + DMatrix::identity(d, d) * lambda;
    let rhs = xw.transpose() * &yc;
    let w = gram
        .cholesky()
        .expect("ridge normal matrix is positive definite for λ > 0")
        .solve(&rhs);
    let intercept = y_mean - w.dot(&x_mean);

    let residual = &y - (&x * &w).add_scalar(intercept);
    let ss_res: f64 = residual.iter().zip(pi.iter()).map(|(r, p)| p * r * r).sum();
    let ss_tot: f64 = yc.iter().zip(pi.iter()).map(|(r, p)| p * r * r).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(Surrogate {
        weights: w.iter().copied().collect(),
        intercept,
        r2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplainParams {
    pub target: Option<HumourStyle>,
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub lambda: f64,
    /// Defaults to 0.25·√d.
    pub kernel_width: Option<f64>,
}

impl Default for ExplainParams {
    fn default() -> Self {
        Self {
            target: None,
            k: 5,
            n: 1000,
            seed: 0,
            lambda: 1.0,
            kernel_width: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub doc_id: String,
    pub target_class: HumourStyle,
    pub predicted_class: HumourStyle,
    pub confidence: f64,
    /// Descending |weight|; equal magnitudes keep first-occurrence order.
    pub word_weights: Vec<(String, f64)>,
    pub intercept: f64,
    pub local_fidelity_r2: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Importances volunteered by the classifier for this document's words.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_importances: Option<BTreeMap<String, f64>>,
}

pub fn explain(doc: &Document, classifier: &dyn Classifier, params: &ExplainParams) -> Result<Explanation, LimeError> {
    let features = word_features(doc);
    let samples = perturb_samples(doc, params.n, params.seed, params.kernel_width)?;
    let texts: Vec<String> = samples.iter().map(|s| s.text.clone()).collect();
    let probs = classifier.predict_proba(&texts)?;
    if probs.len() != samples.len() {
        return Err(LimeError::ShapeMismatch);
    }
    let predicted_class = probs[0].argmax();
    let target_class = params.target.unwrap_or(predicted_class);
    let masks: Vec<Vec<bool>> = samples.iter().map(|s| s.mask.clone()).collect();
    let targets: Vec<f64> = probs.iter().map(|p| p.get(target_class)).collect();
    let proximities: Vec<f64> = samples.iter().map(|s| s.proximity).collect();
    let fit = fit_local_surrogate(&masks, &targets, &proximities, params.lambda)?;

    let mut word_weights: Vec<(String, f64)> = features.iter().cloned().zip(fit.weights).collect();
    word_weights.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    word_weights.truncate(params.k);
    let feature_importances = classifier.feature_importances(target_class).map(|all| {
        features
            .iter()
            .filter_map(|w| all.get(w).map(|v| (w.clone(), *v)))
            .collect()
    });
    Ok(Explanation {
        doc_id: doc.id.clone(),
        target_class,
        predicted_class,
        confidence: probs[0].confidence(),
        word_weights,
        intercept: fit.intercept,
        local_fidelity_r2: fit.r2,
        n_samples: samples.len(),
        seed: params.seed,
        feature_importances,
    })
}
