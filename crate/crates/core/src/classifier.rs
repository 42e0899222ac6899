//! Five-class humour-style classifiers: an embedded multinomial logistic
//! baseline over count × idf features, and a client for external models.

use std::collections::{BTreeMap, HashMap};
use std::time::Duration;

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::http::{HttpClient, HttpError};
use crate::style::HumourStyle;
use crate::text::{Document, TokenKind};

pub const CLASSES: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("training needs at least two classes, found only {0}")]
    SingleClass(HumourStyle),
    #[error("class {style} has {count} labelled documents; at least {min} are required (add examples or drop the class)")]
    TooFewExamples {
        style: HumourStyle,
        count: usize,
        min: usize,
    },
    #[error("document {0:?} has no label")]
    Unlabelled(String),
    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),
    #[error("classifier transport error (retryable): {0}")]
    Transport(String),
    #[error("classifier protocol error: {message}; payload: {payload}")]
    Protocol { message: String, payload: String },
    #[error("invalid model file: {0}")]
    Model(String),
}

impl From<HttpError> for ClassifierError {
    fn from(e: HttpError) -> Self {
        match e {
            HttpError::Transport(m) => ClassifierError::Transport(m),
            HttpError::Status { status, body } if status >= 500 => {
                ClassifierError::Transport(format!("HTTP {status}: {body}"))
            }
            HttpError::Status { status, body } => ClassifierError::Protocol {
                message: format!("HTTP {status}"),
                payload: body,
            },
        }
    }
}

/// Class probabilities in the fixed label order of [`HumourStyle::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LabelProbs", into = "LabelProbs")]
pub struct ProbabilityVector([f64; CLASSES]);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelProbs {
    affiliative: f64,
    aggressive: f64,
    neutral: f64,
    self_deprecating: f64,
    self_enhancing: f64,
}

impl TryFrom<LabelProbs> for ProbabilityVector {
    type Error = ClassifierError;

    fn try_from(p: LabelProbs) -> Result<Self, Self::Error> {
        Self::new([p.affiliative, p.aggressive, p.neutral, p.self_deprecating, p.self_enhancing])
    }
}

impl From<ProbabilityVector> for LabelProbs {
    fn from(v: ProbabilityVector) -> Self {
        let [affiliative, aggressive, neutral, self_deprecating, self_enhancing] = v.0;
        LabelProbs {
            affiliative,
            aggressive,
            neutral,
            self_deprecating,
            self_enhancing,
        }
    }
}

impl ProbabilityVector {
    pub fn new(probs: [f64; CLASSES]) -> Result<Self, ClassifierError> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(ClassifierError::InvalidProbabilities(format!("{probs:?} has a negative or non-finite entry")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(ClassifierError::InvalidProbabilities(format!("{probs:?} sums to {sum}")));
        }
        Ok(Self(probs))
    }

    pub fn uniform() -> Self {
        Self([1.0 / CLASSES as f64; CLASSES])
    }

    /// Softmax of raw scores.
    pub fn from_logits(logits: &[f64; CLASSES]) -> Self {
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp = logits.map(|z| (z - max).exp());
        let sum: f64 = exp.iter().sum();
        Self(exp.map(|e| e / sum))
    }

    pub fn as_array(&self) -> &[f64; CLASSES] {
        &self.0
    }

    pub fn get(&self, style: HumourStyle) -> f64 {
        self.0[style.index()]
    }

    /// Most probable class; ties go to the earlier label.
    pub fn argmax(&self) -> HumourStyle {
        let mut best = 0;
        for i in 1..CLASSES {
            if self.0[i] > self.0[best] {
                best = i;
            }
        }
        HumourStyle::from_index(best).expect("index < 5")
    }

    pub fn confidence(&self) -> f64 {
        confidence(self)
    }
}

/// Maximum class probability.
pub fn confidence(v: &ProbabilityVector) -> f64 {
    v.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// A black-box probability function over texts.
pub trait Classifier: Send + Sync {
    /// One vector per text, in input order.
    fn predict_proba(&self, texts: &[String]) -> Result<Vec<ProbabilityVector>, ClassifierError>;

    /// Optional per-token importances volunteered by the model.
    fn feature_importances(&self, _style: HumourStyle) -> Option<BTreeMap<String, f64>> {
        None
    }
}

/// Lowercased word, number and clitic token counts.
pub fn term_counts(text: &str) -> BTreeMap<String, usize> {
    let doc = Document::new("", text);
    let mut counts = BTreeMap::new();
    for t in doc.tokens.iter().filter(|t| t.kind != TokenKind::Punct) {
        *counts.entry(t.lower.clone()).or_insert(0) += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub seed: u64,
    pub l2: f64,
    pub epochs: usize,
    /// Keep only the most document-frequent tokens.
    pub max_vocab: Option<usize>,
    pub learning_rate: f64,
    /// Fraction of documents held out for macro-F1; 0 disables the split.
    pub holdout: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            seed: 13,
            l2: 1e-3,
            epochs: 200,
            max_vocab: None,
            learning_rate: 1.0,
            holdout: 0.0,
        }
    }
}

pub const MIN_EXAMPLES_PER_CLASS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub epochs: usize,
    pub l2: f64,
    pub losses: Vec<f64>,
    pub train_documents: usize,
    pub holdout_documents: usize,
    pub holdout_macro_f1: Option<f64>,
    pub holdout_accuracy: Option<f64>,
}

/// Mean cross-entropy plus `l2 / 2 · |W|²` for a linear softmax model over
/// sparse features. Parameters are class-major weights followed by 5 biases.
#[derive(Debug, Clone)]
pub struct SoftmaxObjective {
    pub features: Vec<Vec<(usize, f64)>>,
    pub labels: Vec<usize>,
    pub dim: usize,
    pub l2: f64,
}

impl SoftmaxObjective {
    pub fn parameter_count(&self) -> usize {
        CLASSES * self.dim + CLASSES
    }

    fn logits(&self, params: &[f64], x: &[(usize, f64)]) -> [f64; CLASSES] {
        let bias = &params[CLASSES * self.dim..];
        std::array::from_fn(|c| {
            let w = &params[c * self.dim..(c + 1) * self.dim];
            bias[c] + x.iter().map(|&(j, v)| w[j] * v).sum::<f64>()
        })
    }

    pub fn loss(&self, params: &[f64]) -> f64 {
        let n = self.labels.len() as f64;
        let data: f64 = self
            .features
            .iter()
            .zip(&self.labels)
            .map(|(x, &y)| {
                let z = self.logits(params, x);
                let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
                lse - z[y]
            })
            .sum::<f64>()
            / n;
        let reg: f64 = params[..CLASSES * self.dim].iter().map(|w| w * w).sum();
        data + 0.5 * self.l2 * reg
    }

    pub fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let n = self.labels.len() as f64;
        let mut g = vec![0.0; self.parameter_count()];
        for (x, &y) in self.features.iter().zip(&self.labels) {
            let p = ProbabilityVector::from_logits(&self.logits(params, x));
            for c in 0..CLASSES {
                let r = (p.0[c] - f64::from(u8::from(c == y))) / n;
                for &(j, v) in x {
                    g[c * self.dim + j] += r * v;
                }
                g[CLASSES * self.dim + c] += r;
            }
        }
        for (gi, w) in g.iter_mut().zip(&params[..CLASSES * self.dim]) {
            *gi += self.l2 * w;
        }
        g
    }

    /// Full-batch gradient descent. A step that would raise the loss is
    /// retried at half the step size, so recorded losses never increase.
    pub fn minimize(&self, params: &mut [f64], epochs: usize, learning_rate: f64) -> Vec<f64> {
        let mut lr = learning_rate;
        let mut loss = self.loss(params);
        let mut losses = vec![loss];
        for _ in 0..epochs {
            let g = self.gradient(params);
            loop {
                let candidate: Vec<f64> = params.iter().zip(&g).map(|(p, gi)| p - lr * gi).collect();
                let next = self.loss(&candidate);
                if next <= loss {
                    params.copy_from_slice(&candidate);
                    loss = next;
                    break;
                }
                lr *= 0.5;
                if lr < 1e-12 {
                    break;
                }
            }
            losses.push(loss);
        }
        losses
    }
}

/// Linear softmax classifier over term-count × idf features.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineModel {
    vocabulary: Vec<String>,
    index: HashMap<String, usize>,
    idf: Vec<f64>,
    /// Class-major, `CLASSES × vocabulary.len()`.
    weights: Vec<f64>,
    bias: [f64; CLASSES],
    pub training_meta: Option<TrainingMeta>,
}

impl BaselineModel {
    /// Zero-weight model: predicts the uniform vector for every text.
    pub fn untrained(vocabulary: Vec<String>) -> Self {
        let v = vocabulary.len();
        Self::from_parts(vocabulary, vec![1.0; v], vec![0.0; CLASSES * v], [0.0; CLASSES])
    }

    /// Model with given class-major weights (`CLASSES × vocabulary.len()`).
    pub fn from_weights(
        vocabulary: Vec<String>,
        idf: Vec<f64>,
        weights: Vec<f64>,
        bias: [f64; CLASSES],
    ) -> Result<Self, ClassifierError> {
        let v = vocabulary.len();
        if idf.len() != v || weights.len() != CLASSES * v {
            return Err(ClassifierError::Model(format!(
                "vocabulary has {v} entries but idf has {} and weights {}",
                idf.len(),
                weights.len()
            )));
        }
        let unique: std::collections::BTreeSet<&String> = vocabulary.iter().collect();
        if unique.len() != v {
            return Err(ClassifierError::Model("vocabulary has duplicate tokens".into()));
        }
        Ok(Self::from_parts(vocabulary, idf, weights, bias))
    }

    fn from_parts(vocabulary: Vec<String>, idf: Vec<f64>, weights: Vec<f64>, bias: [f64; CLASSES]) -> Self {
        let index = vocabulary.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self {
            vocabulary,
            index,
            idf,
            weights,
            bias,
            training_meta: None,
        }
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn idf(&self, token: &str) -> Option<f64> {
        self.index.get(token).map(|&j| self.idf[j])
    }

    /// Logit contribution of one occurrence of `token` to `style`.
    pub fn coefficient(&self, style: HumourStyle, token: &str) -> f64 {
        self.index
            .get(token)
            .map_or(0.0, |&j| self.weights[style.index() * self.vocabulary.len() + j] * self.idf[j])
    }

    fn featurize(&self, text: &str) -> Vec<(usize, f64)> {
        term_counts(text)
            .into_iter()
            .filter_map(|(t, c)| self.index.get(&t).map(|&j| (j, c as f64 * self.idf[j])))
            .collect()
    }

    pub fn logits(&self, text: &str) -> [f64; CLASSES] {
        let x = self.featurize(text);
        let v = self.vocabulary.len();
        std::array::from_fn(|c| {
            self.bias[c] + x.iter().map(|&(j, val)| self.weights[c * v + j] * val).sum::<f64>()
        })
    }

    pub fn predict_one(&self, text: &str) -> ProbabilityVector {
        ProbabilityVector::from_logits(&self.logits(text))
    }

    pub fn train(corpus: &[Document], config: &TrainConfig) -> Result<Self, ClassifierError> {
        if corpus.is_empty() {
            return Err(ClassifierError::EmptyCorpus);
        }
        let labels: Vec<HumourStyle> = corpus
            .iter()
            .map(|d| d.gold_label.ok_or_else(|| ClassifierError::Unlabelled(d.id.clone())))
            .collect::<Result<_, _>>()?;
        let mut per_class = [0usize; CLASSES];
        for l in &labels {
            per_class[l.index()] += 1;
        }
        let present: Vec<HumourStyle> = HumourStyle::ALL.into_iter().filter(|s| per_class[s.index()] > 0).collect();
        if present.len() < 2 {
            return Err(ClassifierError::SingleClass(present[0]));
        }
        if let Some(&style) = present.iter().find(|s| per_class[s.index()] < MIN_EXAMPLES_PER_CLASS) {
            return Err(ClassifierError::TooFewExamples {
                style,
                count: per_class[style.index()],
                min: MIN_EXAMPLES_PER_CLASS,
            });
        }

        let mut order: Vec<usize> = (0..corpus.len()).collect();
        let holdout_n = if config.holdout > 0.0 {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));
            ((corpus.len() as f64 * config.holdout).round() as usize).clamp(1, corpus.len() - 1)
        } else {
            0
        };
        let (held, train_idx) = order.split_at(holdout_n);
        let mut train_idx = train_idx.to_vec();
        train_idx.sort_unstable();

        let counts: Vec<BTreeMap<String, usize>> = corpus.iter().map(|d| term_counts(&d.raw_text)).collect();
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for &i in &train_idx {
            for t in counts[i].keys() {
                *df.entry(t).or_insert(0) += 1;
            }
        }
        let mut vocab: Vec<(&str, usize)> = df.into_iter().collect();
        if let Some(max) = config.max_vocab {
            vocab.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
            vocab.truncate(max);
            vocab.sort_by(|a, b| a.0.cmp(b.0));
        }
        let n = train_idx.len() as f64;
        let idf: Vec<f64> = vocab.iter().map(|&(_, d)| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0).collect();
        let vocabulary: Vec<String> = vocab.iter().map(|(t, _)| t.to_string()).collect();
        let mut model = Self::from_parts(vocabulary, idf, Vec::new(), [0.0; CLASSES]);

        let objective = SoftmaxObjective {
            features: train_idx.iter().map(|&i| model.featurize(&corpus[i].raw_text)).collect(),
            labels: train_idx.iter().map(|&i| labels[i].index()).collect(),
            dim: model.vocabulary.len(),
            l2: config.l2,
        };
        let mut params = vec![0.0; objective.parameter_count()];
        let losses = objective.minimize(&mut params, config.epochs, config.learning_rate);
        let v = model.vocabulary.len();
        model.bias = std::array::from_fn(|c| params[CLASSES * v + c]);
        params.truncate(CLASSES * v);
        model.weights = params;

        let (holdout_macro_f1, holdout_accuracy) = if held.is_empty() {
            (None, None)
        } else {
            let gold: Vec<HumourStyle> = held.iter().map(|&i| labels[i]).collect();
            let pred: Vec<HumourStyle> = held.iter().map(|&i| model.predict_one(&corpus[i].raw_text).argmax()).collect();
            (Some(macro_f1(&gold, &pred)), Some(accuracy(&gold, &pred)))
        };
        model.training_meta = Some(TrainingMeta {
            seed: config.seed,
            epochs: config.epochs,
            l2: config.l2,
            losses,
            train_documents: train_idx.len(),
            holdout_documents: held.len(),
            holdout_macro_f1,
            holdout_accuracy,
        });
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            vocabulary: self.vocabulary.clone(),
            idf: encode_f64s(&self.idf),
            weights: encode_f64s(&self.weights),
            bias: encode_f64s(&self.bias),
            training_meta: self.training_meta.clone(),
        };
        serde_json::to_string_pretty(&file).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifierError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ClassifierError::Model(e.to_string()))?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(ClassifierError::Model(format!(
                "unsupported format {} v{}",
                file.format, file.version
            )));
        }
        let idf = decode_f64s(&file.idf)?;
        let weights = decode_f64s(&file.weights)?;
        let bias: [f64; CLASSES] = decode_f64s(&file.bias)?
            .try_into()
            .map_err(|_| ClassifierError::Model("bias must have 5 entries".into()))?;
        let mut model = Self::from_weights(file.vocabulary, idf, weights, bias)?;
        model.training_meta = file.training_meta;
        Ok(model)
    }
}

impl Classifier for BaselineModel {
    fn predict_proba(&self, texts: &[String]) -> Result<Vec<ProbabilityVector>, ClassifierError> {
        Ok(texts.iter().map(|t| self.predict_one(t)).collect())
    }

    fn feature_importances(&self, style: HumourStyle) -> Option<BTreeMap<String, f64>> {
        Some(self.vocabulary.iter().map(|t| (t.clone(), self.coefficient(style, t))).collect())
    }
}

const MODEL_FORMAT: &str = "risus-baseline";
const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    vocabulary: Vec<String>,
    /// Base64 of little-endian f64s.
    idf: String,
    weights: String,
    bias: String,
    training_meta: Option<TrainingMeta>,
}

fn encode_f64s(values: &[f64]) -> String {
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    B64.encode(bytes)
}

fn decode_f64s(text: &str) -> Result<Vec<f64>, ClassifierError> {
    let bytes = B64.decode(text).map_err(|e| ClassifierError::Model(e.to_string()))?;
    if bytes.len() % 8 != 0 {
        return Err(ClassifierError::Model("float array length is not a multiple of 8".into()));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect())
}

pub fn accuracy(gold: &[HumourStyle], pred: &[HumourStyle]) -> f64 {
    let hits = gold.iter().zip(pred).filter(|(g, p)| g == p).count();
    hits as f64 / gold.len().max(1) as f64
}

/// Unweighted mean F1 over classes that occur in `gold` or `pred`.
pub fn macro_f1(gold: &[HumourStyle], pred: &[HumourStyle]) -> f64 {
    let classes: Vec<HumourStyle> = HumourStyle::ALL
        .into_iter()
        .filter(|s| gold.contains(s) || pred.contains(s))
        .collect();
    let f1s = classes.iter().map(|&c| {
        let tp = gold.iter().zip(pred).filter(|(g, p)| **g == c && **p == c).count() as f64;
        let fp = gold.iter().zip(pred).filter(|(g, p)| **g != c && **p == c).count() as f64;
        let fn_ = gold.iter().zip(pred).filter(|(g, p)| **g == c && **p != c).count() as f64;
        if tp == 0.0 {
            0.0
        } else {
            2.0 * tp / (2.0 * tp + fp + fn_)
        }
    });
    f1s.sum::<f64>() / classes.len().max(1) as f64
}

#[derive(Debug, Clone, Serialize)]
struct PredictRequest<'a> {
    texts: Vec<PredictItem<'a>>,
}

#[derive(Debug, Clone, Serialize)]
struct PredictItem<'a> {
    id: String,
    text: &'a str,
}

#[derive(Debug, Clone, Deserialize)]
struct PredictResponse {
    predictions: Vec<Prediction>,
    #[serde(default)]
    feature_importances: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Deserialize)]
struct Prediction {
    id: String,
    probs: ProbabilityVector,
}

/// External classifier speaking `POST {endpoint}` with the prediction protocol.
#[derive(Debug, Clone)]
pub struct RemoteClassifier {
    endpoint: String,
    client: HttpClient,
    batch_size: usize,
    importances: std::sync::Arc<std::sync::Mutex<Option<BTreeMap<String, f64>>>>,
}

impl RemoteClassifier {
    pub fn new(endpoint: impl Into<String>, timeout: Duration, retries: u32, batch_size: usize) -> Self {
        Self {
            endpoint: endpoint.into(),
            client: HttpClient::new(timeout, retries),
            batch_size: batch_size.max(1),
            importances: Default::default(),
        }
    }

    fn predict_batch(&self, texts: &[String], offset: usize) -> Result<Vec<ProbabilityVector>, ClassifierError> {
        let request = PredictRequest {
            texts: texts
                .iter()
                .enumerate()
                .map(|(i, t)| PredictItem {
                    id: (offset + i).to_string(),
                    text: t,
                })
                .collect(),
        };
        let body = serde_json::to_value(&request).expect("request serializes");
        let payload = self.client.post_json(&self.endpoint, &body)?;
        let protocol = |message: String| ClassifierError::Protocol {
            message,
            payload: payload.clone(),
        };
        let resp: PredictResponse = serde_json::from_str(&payload).map_err(|e| protocol(e.to_string()))?;
        if resp.feature_importances.is_some() {
            *self.importances.lock().expect("importances lock") = resp.feature_importances;
        }
        let mut by_id: HashMap<String, ProbabilityVector> =
            resp.predictions.into_iter().map(|p| (p.id, p.probs)).collect();
        request
            .texts
            .iter()
            .map(|it| by_id.remove(&it.id).ok_or_else(|| protocol(format!("no prediction for id {}", it.id))))
            .collect()
    }
}

impl Classifier for RemoteClassifier {
    fn predict_proba(&self, texts: &[String]) -> Result<Vec<ProbabilityVector>, ClassifierError> {
        let mut out = Vec::with_capacity(texts.len());
        for (b, chunk) in texts.chunks(self.batch_size).enumerate() {
            out.extend(self.predict_batch(chunk, b * self.batch_size)?);
        }
        Ok(out)
    }

    fn feature_importances(&self, _style: HumourStyle) -> Option<BTreeMap<String, f64>> {
        self.importances.lock().expect("importances lock").clone()
    }
}
