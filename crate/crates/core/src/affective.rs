//! Affective features: local lexicon polarity/subjectivity, and sarcasm,
//! sentiment and emotion scores obtained through the scorer protocol or a
//! recorded fixture.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::http::{HttpClient, HttpError};
use crate::lexicon::{SentimentLexicon, WordNet};
use crate::text::{Document, Token};

#[derive(Debug, thiserror::Error)]
pub enum AffectError {
    #[error("scorer transport error (retryable): {0}")]
    Transport(String),
    #[error("scorer protocol error: {message}; payload: {payload}")]
    Protocol { message: String, payload: String },
    #[error("no affect scores for document id {0:?}")]
    MissingId(String),
    #[error("invalid affect value: {0}")]
    Validation(String),
    #[error("fixture line {line}: {message}")]
    Fixture { line: usize, message: String },
    #[error("reading fixture {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl From<HttpError> for AffectError {
    fn from(e: HttpError) -> Self {
        match e {
            HttpError::Transport(m) => AffectError::Transport(m),
            HttpError::Status { status, body } if status >= 500 => {
                AffectError::Transport(format!("HTTP {status}: {body}"))
            }
            HttpError::Status { status, body } => AffectError::Protocol {
                message: format!("HTTP {status}"),
                payload: body,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Negative,
    Neutral,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Joy,
    Anger,
    Sadness,
    Fear,
    Love,
    Surprise,
}

impl Emotion {
    pub const ALL: [Emotion; 6] = [
        Emotion::Joy,
        Emotion::Anger,
        Emotion::Sadness,
        Emotion::Fear,
        Emotion::Love,
        Emotion::Surprise,
    ];

    pub fn display_name(self) -> &'static str {
        match self {
            Emotion::Joy => "Joy",
            Emotion::Anger => "Anger",
            Emotion::Sadness => "Sadness",
            Emotion::Fear => "Fear",
            Emotion::Love => "Love",
            Emotion::Surprise => "Surprise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentimentScores {
    pub positive: f64,
    pub negative: f64,
    pub neutral: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmotionScores {
    pub joy: f64,
    pub anger: f64,
    pub sadness: f64,
    pub fear: f64,
    pub love: f64,
    pub surprise: f64,
}

impl EmotionScores {
    pub fn get(&self, e: Emotion) -> f64 {
        match e {
            Emotion::Joy => self.joy,
            Emotion::Anger => self.anger,
            Emotion::Sadness => self.sadness,
            Emotion::Fear => self.fear,
            Emotion::Love => self.love,
            Emotion::Surprise => self.surprise,
        }
    }

    /// Highest-scoring emotion; ties go to the earlier emotion in [`Emotion::ALL`].
    pub fn dominant(&self) -> (Emotion, f64) {
        Emotion::ALL
            .iter()
            .fold((Emotion::Joy, f64::NEG_INFINITY), |best, &e| {
                if self.get(e) > best.1 {
                    (e, self.get(e))
                } else {
                    best
                }
            })
    }
}

/// One scorer response row, validated on deserialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScoreRow")]
pub struct ScoreRow {
    pub id: String,
    pub sarcasm: f64,
    pub sentiment: SentimentScores,
    pub emotion: EmotionScores,
}

#[derive(Deserialize)]
struct RawScoreRow {
    id: String,
    sarcasm: f64,
    sentiment: SentimentScores,
    emotion: EmotionScores,
}

fn unit(name: &str, v: f64) -> Result<(), String> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(format!("{name} = {v} outside [0, 1]"))
    }
}

impl TryFrom<RawScoreRow> for ScoreRow {
    type Error = String;

    fn try_from(r: RawScoreRow) -> Result<Self, Self::Error> {
        unit("sarcasm", r.sarcasm)?;
        let s = &r.sentiment;
        unit("sentiment.positive", s.positive)?;
        unit("sentiment.negative", s.negative)?;
        unit("sentiment.neutral", s.neutral)?;
        for e in Emotion::ALL {
            unit(e.display_name(), r.emotion.get(e))?;
        }
        let total: f64 = Emotion::ALL.iter().map(|&e| r.emotion.get(e)).sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(format!("emotion scores sum to {total}, expected 1 ± 1e-6"));
        }
        Ok(ScoreRow {
            id: r.id,
            sarcasm: r.sarcasm,
            sentiment: r.sentiment,
            emotion: r.emotion,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextItem {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub texts: Vec<TextItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub scores: Vec<ScoreRow>,
}

/// Per-document affective features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAffectScores")]
pub struct AffectScores {
    pub sarcasm_prob: f64,
    pub sarcasm_flag: bool,
    pub sentiment_label: SentimentLabel,
    pub sentiment_confidence: f64,
    pub sentiment_strength: f64,
    pub emotion_label: Emotion,
    pub emotion_confidence: f64,
    pub polarity: f64,
    pub subjectivity: f64,
}

#[derive(Deserialize)]
struct RawAffectScores {
    sarcasm_prob: f64,
    sarcasm_flag: bool,
    sentiment_label: SentimentLabel,
    sentiment_confidence: f64,
    sentiment_strength: f64,
    emotion_label: Emotion,
    emotion_confidence: f64,
    polarity: f64,
    subjectivity: f64,
}

impl TryFrom<RawAffectScores> for AffectScores {
    type Error = String;

    fn try_from(r: RawAffectScores) -> Result<Self, Self::Error> {
        unit("sarcasm_prob", r.sarcasm_prob)?;
        unit("sentiment_confidence", r.sentiment_confidence)?;
        unit("emotion_confidence", r.emotion_confidence)?;
        unit("subjectivity", r.subjectivity)?;
        for (name, v) in [("sentiment_strength", r.sentiment_strength), ("polarity", r.polarity)] {
            if !(v.is_finite() && (-1.0..=1.0).contains(&v)) {
                return Err(format!("{name} = {v} outside [-1, 1]"));
            }
        }
        if r.sarcasm_flag != (r.sarcasm_prob > SARCASM_THRESHOLD) {
            return Err("sarcasm_flag disagrees with sarcasm_prob".into());
        }
        Ok(AffectScores {
            sarcasm_prob: r.sarcasm_prob,
            sarcasm_flag: r.sarcasm_flag,
            sentiment_label: r.sentiment_label,
            sentiment_confidence: r.sentiment_confidence,
            sentiment_strength: r.sentiment_strength,
            emotion_label: r.emotion_label,
            emotion_confidence: r.emotion_confidence,
            polarity: r.polarity,
            subjectivity: r.subjectivity,
        })
    }
}

pub const SARCASM_THRESHOLD: f64 = 0.5;

impl AffectScores {
    /// Combines a scorer row with locally computed lexicon polarity and subjectivity.
    pub fn from_row(row: &ScoreRow, polarity: f64, subjectivity: f64) -> Result<Self, AffectError> {
        let (sentiment_label, sentiment_confidence) = dominant_sentiment(&row.sentiment)?;
        let (emotion_label, emotion_confidence) = row.emotion.dominant();
        Ok(Self {
            sarcasm_prob: row.sarcasm,
            sarcasm_flag: row.sarcasm > SARCASM_THRESHOLD,
            sentiment_label,
            sentiment_confidence,
            sentiment_strength: sentiment_strength(row.sentiment.positive, row.sentiment.negative)?,
            emotion_label,
            emotion_confidence,
            polarity,
            subjectivity,
        })
    }
}

/// positive − negative.
pub fn sentiment_strength(positive: f64, negative: f64) -> Result<f64, AffectError> {
    unit("positive", positive).map_err(AffectError::Validation)?;
    unit("negative", negative).map_err(AffectError::Validation)?;
    Ok(positive - negative)
}

/// Argmax label. Ties resolve toward the later label in negative < neutral < positive;
/// all-zero scores give neutral with confidence 0.
pub fn dominant_sentiment(scores: &SentimentScores) -> Result<(SentimentLabel, f64), AffectError> {
    let ordered = [
        (SentimentLabel::Negative, scores.negative),
        (SentimentLabel::Neutral, scores.neutral),
        (SentimentLabel::Positive, scores.positive),
    ];
    if let Some((_, v)) = ordered.iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
        return Err(AffectError::Validation(format!("sentiment score {v} is negative")));
    }
    if ordered.iter().all(|(_, v)| *v == 0.0) {
        return Ok((SentimentLabel::Neutral, 0.0));
    }
    Ok(ordered
        .iter()
        .fold(ordered[0], |best, &cur| if cur.1 >= best.1 { cur } else { best }))
}

/// Net sentiment and subjectivity of one word: means over the first-listed
/// sense of every POS where it has one. `None` unless some sense is non-objective.
pub fn word_polarity(word: &str, lexicon: &SentimentLexicon, wordnet: Option<&WordNet>) -> Option<(f64, f64)> {
    let senses = lexicon.word_senses(word, wordnet);
    if senses.iter().all(|(_, s)| s.subjectivity() <= 0.0) {
        return None;
    }
    let n = senses.len() as f64;
    let net = senses.iter().map(|(_, s)| s.net()).sum::<f64>() / n;
    let subj = senses.iter().map(|(_, s)| s.subjectivity()).sum::<f64>() / n;
    Some((net, subj))
}

/// Mean net sentiment and mean subjectivity over sentiment-bearing content
/// tokens; (0, 0) when none carries sentiment.
pub fn lexicon_polarity_subjectivity<'t>(
    tokens: impl IntoIterator<Item = &'t Token>,
    lexicon: &SentimentLexicon,
    wordnet: Option<&WordNet>,
    stopwords: &BTreeSet<String>,
) -> (f64, f64) {
    let mut cache: HashMap<&str, Option<(f64, f64)>> = HashMap::new();
    let (mut net, mut subj, mut n) = (0.0, 0.0, 0usize);
    for t in tokens {
        if !t.is_alphabetic() || stopwords.contains(&t.lower) {
            continue;
        }
        let score = *cache
            .entry(t.lower.as_str())
            .or_insert_with(|| word_polarity(&t.lower, lexicon, wordnet));
        if let Some((p, s)) = score {
            net += p;
            subj += s;
            n += 1;
        }
    }
    if n == 0 {
        (0.0, 0.0)
    } else {
        (net / n as f64, subj / n as f64)
    }
}

/// A source of scorer rows.
pub trait ScorerBackend: Send + Sync {
    fn score_batch(&self, items: &[TextItem]) -> Result<Vec<ScoreRow>, AffectError>;
}

/// Recorded scorer responses, keyed by document id.
#[derive(Debug, Clone, Default)]
pub struct FixtureScorer {
    rows: HashMap<String, ScoreRow>,
}

impl FixtureScorer {
    pub fn from_rows(rows: impl IntoIterator<Item = ScoreRow>) -> Self {
        Self {
            rows: rows.into_iter().map(|r| (r.id.clone(), r)).collect(),
        }
    }

    /// Reads JSONL response rows. Blank lines are skipped.
    pub fn load(path: &Path) -> Result<Self, AffectError> {
        let io = |source| AffectError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = std::fs::File::open(path).map_err(io)?;
        let mut rows = Vec::new();
        for (no, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line.map_err(io)?;
            if line.trim().is_empty() {
                continue;
            }
            let row: ScoreRow = serde_json::from_str(&line).map_err(|e| AffectError::Fixture {
                line: no + 1,
                message: e.to_string(),
            })?;
            rows.push(row);
        }
        Ok(Self::from_rows(rows))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl ScorerBackend for FixtureScorer {
    /// Ids absent from the fixture are left out of the response, as a live scorer would.
    fn score_batch(&self, items: &[TextItem]) -> Result<Vec<ScoreRow>, AffectError> {
        Ok(items.iter().filter_map(|it| self.rows.get(&it.id).cloned()).collect())
    }
}

/// Client for a live scorer speaking the JSON protocol at `POST {endpoint}`.
#[derive(Debug, Clone)]
pub struct HttpScorer {
    endpoint: String,
    client: HttpClient,
}

impl HttpScorer {
    pub fn new(endpoint: impl Into<String>, timeout: Duration, retries: u32) -> Self {
        Self {
            endpoint: endpoint.into(),
            client: HttpClient::new(timeout, retries),
        }
    }
}

impl ScorerBackend for HttpScorer {
    fn score_batch(&self, items: &[TextItem]) -> Result<Vec<ScoreRow>, AffectError> {
        let body = serde_json::to_value(ScoreRequest { texts: items.to_vec() }).expect("request serializes");
        let text = self.client.post_json(&self.endpoint, &body)?;
        let resp: ScoreResponse = serde_json::from_str(&text).map_err(|e| AffectError::Protocol {
            message: e.to_string(),
            payload: text.clone(),
        })?;
        Ok(resp.scores)
    }
}

/// Scores every document, batching requests with at most `max_in_flight`
/// concurrent batches. Results are matched by id and returned in input order.
pub fn fetch_affect_scores(
    docs: &[Document],
    scorer: &dyn ScorerBackend,
    batch_size: usize,
    max_in_flight: usize,
) -> Result<Vec<ScoreRow>, AffectError> {
    fetch_affect_scores_each(docs, scorer, batch_size, max_in_flight)?.into_iter().collect()
}

/// Like [`fetch_affect_scores`], but a document missing from the responses
/// gets its own `MissingId` instead of failing the whole call.
pub fn fetch_affect_scores_each(
    docs: &[Document],
    scorer: &dyn ScorerBackend,
    batch_size: usize,
    max_in_flight: usize,
) -> Result<Vec<Result<ScoreRow, AffectError>>, AffectError> {
    let items: Vec<TextItem> = docs
        .iter()
        .map(|d| TextItem {
            id: d.id.clone(),
            text: d.raw_text.clone(),
        })
        .collect();
    let batches: Vec<&[TextItem]> = items.chunks(batch_size.max(1)).collect();
    let mut by_id: HashMap<String, ScoreRow> = HashMap::new();
    for wave in batches.chunks(max_in_flight.max(1)) {
        let results: Vec<Result<Vec<ScoreRow>, AffectError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = wave
                .iter()
                .map(|batch| scope.spawn(move || scorer.score_batch(batch)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("scorer thread")).collect()
        });
        for rows in results {
            for row in rows? {
                by_id.insert(row.id.clone(), row);
            }
        }
    }
    Ok(items
        .iter()
        .map(|it| by_id.remove(&it.id).ok_or_else(|| AffectError::MissingId(it.id.clone())))
        .collect())
}
