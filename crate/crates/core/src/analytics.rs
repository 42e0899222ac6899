//! Corpus-level analysis: per-style descriptives, correlation matrices,
//! rank and contingency tests, target detection and the misclassification
//! taxonomy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::affective::Emotion;
use crate::classifier::{ProbabilityVector, CLASSES};
use crate::features::{FeatureProfile, NumericFeature};
use crate::lexicon::WordLists;
use crate::style::HumourStyle;
use crate::tagger::CoarseTag;
use crate::text::Document;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("no records")]
    Empty,
    #[error("record {0} has no gold label")]
    MissingGold(String),
    #[error("need at least {min} observations, got {got}")]
    TooFewObservations { got: usize, min: usize },
    #[error("column {index} has {got} values, expected {expected}")]
    RaggedColumns { index: usize, got: usize, expected: usize },
    #[error("need at least 2 groups, got {0}")]
    TooFewGroups(usize),
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("contingency table must be at least 2x2 and rectangular")]
    TableShape,
    #[error("contingency table has an all-zero {axis} {index}")]
    ZeroMarginal { axis: &'static str, index: usize },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("record {doc_id}: predicted_label/confidence disagree with prob_vector")]
    InconsistentRecord { doc_id: String },
}

/// Who or what a joke is aimed at. Produced by word-list heuristics, not annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetFlags {
    pub self_targeted: bool,
    pub other_targeted: bool,
    pub situation_targeted: bool,
    pub heuristic: bool,
}

const DETERMINERS: [&str; 11] = ["a", "an", "the", "this", "that", "these", "those", "some", "every", "each", "all"];

/// Self = any self-reference term; other = a second/third-person pronoun or a
/// person noun; situation = neither fired, or the first sentence opens with
/// a non-person noun directly followed by a verb.
pub fn detect_targets(doc: &Document, tags: &[CoarseTag], lists: &WordLists) -> TargetFlags {
    let words = || doc.tokens.iter().filter(|t| t.is_word_like());
    let self_targeted = words().any(|t| lists.self_reference.contains(&t.lower));
    let other_targeted =
        words().any(|t| lists.second_third_person.contains(&t.lower) || lists.person_nouns.contains(&t.lower));
    let situation_targeted = !(self_targeted || other_targeted) || inanimate_subject(doc, tags, lists);
    TargetFlags {
        self_targeted,
        other_targeted,
        situation_targeted,
        heuristic: true,
    }
}

fn inanimate_subject(doc: &Document, tags: &[CoarseTag], lists: &WordLists) -> bool {
    let Some(first) = doc.sentences.first() else {
        return false;
    };
    let mut words = first
        .clone()
        .filter(|&i| doc.tokens[i].is_word_like())
        .skip_while(|&i| DETERMINERS.contains(&doc.tokens[i].lower.as_str()));
    let (Some(head), Some(next)) = (words.next(), words.next()) else {
        return false;
    };
    let lower = &doc.tokens[head].lower;
    tags[head] == CoarseTag::Noun
        && tags[next] == CoarseTag::Verb
        && !lists.person_nouns.contains(lower)
        && !lists.self_reference.contains(lower)
        && !lists.second_third_person.contains(lower)
}

/// One classified document with everything the corpus tables need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRecord")]
pub struct PredictionRecord {
    pub doc_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gold_label: Option<HumourStyle>,
    pub predicted_label: HumourStyle,
    pub confidence: f64,
    pub prob_vector: ProbabilityVector,
    pub features: FeatureProfile,
    pub targets: TargetFlags,
}

#[derive(Deserialize)]
struct RawRecord {
    doc_id: String,
    #[serde(default)]
    gold_label: Option<HumourStyle>,
    predicted_label: HumourStyle,
    confidence: f64,
    prob_vector: ProbabilityVector,
    features: FeatureProfile,
    targets: TargetFlags,
}

impl TryFrom<RawRecord> for PredictionRecord {
    type Error = AnalyticsError;

    fn try_from(r: RawRecord) -> Result<Self, Self::Error> {
        let record = PredictionRecord::new(r.doc_id, r.gold_label, r.prob_vector, r.features, r.targets);
        if record.predicted_label != r.predicted_label || record.confidence != r.confidence {
            return Err(AnalyticsError::InconsistentRecord { doc_id: record.doc_id });
        }
        Ok(record)
    }
}

impl PredictionRecord {
    pub fn new(
        doc_id: impl Into<String>,
        gold_label: Option<HumourStyle>,
        prob_vector: ProbabilityVector,
        features: FeatureProfile,
        targets: TargetFlags,
    ) -> Self {
        Self {
            doc_id: doc_id.into(),
            gold_label,
            predicted_label: prob_vector.argmax(),
            confidence: prob_vector.confidence(),
            prob_vector,
            features,
            targets,
        }
    }

    pub fn is_error(&self) -> bool {
        self.gold_label.is_some_and(|g| g != self.predicted_label)
    }
}

/// Mean, sample standard deviation, min and max. `sd` is `None` for one value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Descriptive {
    pub n: usize,
    pub mean: f64,
    pub sd: Option<f64>,
    pub min: f64,
    pub max: f64,
}

pub fn describe(values: &[f64]) -> Option<Descriptive> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = (mean(values)).clamp(min, max);
    let sd = (n > 1).then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt());
    Some(Descriptive { n, mean, sd, min, max })
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupBy {
    Gold,
    #[default]
    Predicted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleGroupStats {
    pub style: HumourStyle,
    pub n: usize,
    pub mean_confidence: f64,
    pub sarcasm_percent: f64,
    pub emotion_counts: BTreeMap<Emotion, usize>,
    pub features: BTreeMap<NumericFeature, Descriptive>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleStats {
    pub group_by: GroupBy,
    pub total: usize,
    /// Only styles with at least one record, in class order.
    pub styles: Vec<StyleGroupStats>,
}

impl StyleStats {
    pub fn get(&self, style: HumourStyle) -> Option<&StyleGroupStats> {
        self.styles.iter().find(|s| s.style == style)
    }
}

fn group_label(r: &PredictionRecord, group_by: GroupBy) -> Result<HumourStyle, AnalyticsError> {
    match group_by {
        GroupBy::Predicted => Ok(r.predicted_label),
        GroupBy::Gold => r.gold_label.ok_or_else(|| AnalyticsError::MissingGold(r.doc_id.clone())),
    }
}

pub fn style_descriptives(records: &[PredictionRecord], group_by: GroupBy) -> Result<StyleStats, AnalyticsError> {
    if records.is_empty() {
        return Err(AnalyticsError::Empty);
    }
    let mut groups: BTreeMap<HumourStyle, Vec<&PredictionRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(group_label(r, group_by)?).or_default().push(r);
    }
    let styles = groups
        .into_iter()
        .map(|(style, members)| {
            let n = members.len();
            let confidences: Vec<f64> = members.iter().map(|r| r.confidence).collect();
            let sarcastic = members.iter().filter(|r| r.features.affective.sarcasm_flag).count();
            let mut emotion_counts: BTreeMap<Emotion, usize> = Emotion::ALL.into_iter().map(|e| (e, 0)).collect();
            for r in &members {
                *emotion_counts.entry(r.features.affective.emotion_label).or_default() += 1;
            }
            let features = NumericFeature::ALL
                .into_iter()
                .filter_map(|f| {
                    let values: Vec<f64> = members.iter().map(|r| f.value(&r.features)).collect();
                    describe(&values).map(|d| (f, d))
                })
                .collect();
            StyleGroupStats {
                style,
                n,
                mean_confidence: mean(&confidences),
                sarcasm_percent: 100.0 * sarcastic as f64 / n as f64,
                emotion_counts,
                features,
            }
        })
        .collect();
    Ok(StyleStats {
        group_by,
        total: records.len(),
        styles,
    })
}

/// Average ranks (1-based); tied values share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let end = order[start..]
            .iter()
            .position(|&i| values[i] != values[order[start]])
            .map_or(order.len(), |p| start + p);
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation; `None` when either variable is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&average_ranks(x), &average_ranks(y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    Pearson,
    Spearman,
}

impl CorrelationMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrelationMethod::Pearson => "pearson",
            CorrelationMethod::Spearman => "spearman",
        }
    }
}

/// Symmetric matrix with unit diagonal; pairs involving a constant column are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub method: CorrelationMethod,
    pub features: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.features.iter().position(|f| f == a)?;
        let j = self.features.iter().position(|f| f == b)?;
        self.values[i][j]
    }
}

pub const MIN_CORRELATION_OBSERVATIONS: usize = 3;

pub fn correlation_matrix(
    names: &[String],
    columns: &[Vec<f64>],
    method: CorrelationMethod,
) -> Result<CorrelationMatrix, AnalyticsError> {
    let n = columns.first().map_or(0, Vec::len);
    if n < MIN_CORRELATION_OBSERVATIONS {
        return Err(AnalyticsError::TooFewObservations {
            got: n,
            min: MIN_CORRELATION_OBSERVATIONS,
        });
    }
    if let Some((index, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != n) {
        return Err(AnalyticsError::RaggedColumns {
            index,
            got: c.len(),
            expected: n,
        });
    }
    if names.len() != columns.len() {
        return Err(AnalyticsError::RaggedColumns {
            index: names.len(),
            got: columns.len(),
            expected: names.len(),
        });
    }
    if columns.iter().flatten().any(|v| !v.is_finite()) {
        return Err(AnalyticsError::NonFinite);
    }
    let prepared: Vec<Vec<f64>> = match method {
        CorrelationMethod::Pearson => columns.to_vec(),
        CorrelationMethod::Spearman => columns.iter().map(|c| average_ranks(c)).collect(),
    };
    let k = columns.len();
    let mut values = vec![vec![None; k]; k];
    for i in 0..k {
        values[i][i] = Some(1.0);
        for j in (i + 1)..k {
            let r = pearson(&prepared[i], &prepared[j]);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        method,
        features: names.to_vec(),
        values,
    })
}

/// Feature columns over records, in record order.
pub fn feature_columns(records: &[PredictionRecord], features: &[NumericFeature]) -> Vec<Vec<f64>> {
    features
        .iter()
        .map(|f| records.iter().map(|r| f.value(&r.features)).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub df: usize,
}

fn chi_square_upper_tail(statistic: f64, df: usize) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(df as f64).map_or(1.0, |d| d.sf(statistic))
}

pub const MIN_KRUSKAL_OBSERVATIONS: usize = 5;

/// Tie-corrected Kruskal-Wallis H with a chi-square (groups − 1) p-value.
/// All-identical observations give H = 0, p = 1.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<TestResult, AnalyticsError> {
    if groups.len() < 2 {
        return Err(AnalyticsError::TooFewGroups(groups.len()));
    }
    if let Some(i) = groups.iter().position(Vec::is_empty) {
        return Err(AnalyticsError::EmptyGroup(i));
    }
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    if pooled.iter().any(|v| !v.is_finite()) {
        return Err(AnalyticsError::NonFinite);
    }
    let n = pooled.len();
    if n < MIN_KRUSKAL_OBSERVATIONS {
        return Err(AnalyticsError::TooFewObservations {
            got: n,
            min: MIN_KRUSKAL_OBSERVATIONS,
        });
    }
    let df = groups.len() - 1;
    let ranks = average_ranks(&pooled);
    let nf = n as f64;
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = 12.0 / (nf * (nf + 1.0)) * sum - 3.0 * (nf + 1.0);

    let mut sorted = pooled;
    sorted.sort_by(f64::total_cmp);
    let ties: f64 = sorted
        .chunk_by(|a, b| a == b)
        .map(|run| {
            let t = run.len() as f64;
            t * t * t - t
        })
        .sum();
    let correction = 1.0 - ties / (nf * nf * nf - nf);
    if correction <= 0.0 {
        return Ok(TestResult {
            statistic: 0.0,
            p_value: 1.0,
            df,
        });
    }
    let statistic = (h / correction).max(0.0);
    Ok(TestResult {
        statistic,
        p_value: chi_square_upper_tail(statistic, df),
        df,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub p_value: f64,
    pub df: usize,
    /// Some expected cell count is below 5, so the approximation is weak.
    pub low_expected_warning: bool,
}

/// Pearson chi-square test of independence, without continuity correction.
pub fn chi_square_association(table: &[Vec<u64>]) -> Result<ChiSquareResult, AnalyticsError> {
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    if rows < 2 || cols < 2 || table.iter().any(|r| r.len() != cols) {
        return Err(AnalyticsError::TableShape);
    }
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let col_sums: Vec<f64> = (0..cols).map(|j| table.iter().map(|r| r[j]).sum::<u64>() as f64).collect();
    if let Some(index) = row_sums.iter().position(|&s| s == 0.0) {
        return Err(AnalyticsError::ZeroMarginal { axis: "row", index });
    }
    if let Some(index) = col_sums.iter().position(|&s| s == 0.0) {
        return Err(AnalyticsError::ZeroMarginal { axis: "column", index });
    }
    let total: f64 = row_sums.iter().sum();
    let mut statistic = 0.0;
    let mut low_expected_warning = false;
    for (i, row) in table.iter().enumerate() {
        for (j, &observed) in row.iter().enumerate() {
            let expected = row_sums[i] * col_sums[j] / total;
            low_expected_warning |= expected < 5.0;
            statistic += (observed as f64 - expected).powi(2) / expected;
        }
    }
    let df = (rows - 1) * (cols - 1);
    Ok(ChiSquareResult {
        statistic,
        p_value: chi_square_upper_tail(statistic, df),
        df,
        low_expected_warning,
    })
}

/// Rows are gold labels, columns predicted labels, both in class order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix(pub [[usize; CLASSES]; CLASSES]);

impl ConfusionMatrix {
    pub fn get(&self, gold: HumourStyle, predicted: HumourStyle) -> usize {
        self.0[gold.index()][predicted.index()]
    }

    pub fn total(&self) -> usize {
        self.0.iter().flatten().sum()
    }

    pub fn off_diagonal(&self) -> usize {
        self.total() - (0..CLASSES).map(|i| self.0[i][i]).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorGroup {
    pub true_label: HumourStyle,
    pub predicted_label: HumourStyle,
    pub n: usize,
    pub confidence_mean: f64,
    pub confidence_sd: Option<f64>,
    pub semantic_conflict_mean: f64,
    pub semantic_conflict_sd: Option<f64>,
    pub polarity_mean: f64,
    pub subjectivity_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorTaxonomy {
    /// Misclassification cells in (true, predicted) class order.
    pub groups: Vec<ErrorGroup>,
    pub confusion: ConfusionMatrix,
}

/// Groups misclassified records by (true, predicted). Records without a gold label are ignored.
pub fn error_taxonomy(records: &[PredictionRecord]) -> ErrorTaxonomy {
    let mut confusion = ConfusionMatrix::default();
    let mut cells: BTreeMap<(HumourStyle, HumourStyle), Vec<&PredictionRecord>> = BTreeMap::new();
    for r in records {
        let Some(gold) = r.gold_label else { continue };
        confusion.0[gold.index()][r.predicted_label.index()] += 1;
        if gold != r.predicted_label {
            cells.entry((gold, r.predicted_label)).or_default().push(r);
        }
    }
    let groups = cells
        .into_iter()
        .map(|((true_label, predicted_label), members)| {
            let column = |f: &dyn Fn(&PredictionRecord) -> f64| -> Descriptive {
                let values: Vec<f64> = members.iter().map(|r| f(r)).collect();
                describe(&values).expect("cells are non-empty")
            };
            let confidence = column(&|r| r.confidence);
            let conflicts = column(&|r| NumericFeature::SemanticConflict.value(&r.features));
            ErrorGroup {
                true_label,
                predicted_label,
                n: members.len(),
                confidence_mean: confidence.mean,
                confidence_sd: confidence.sd,
                semantic_conflict_mean: conflicts.mean,
                semantic_conflict_sd: conflicts.sd,
                polarity_mean: column(&|r| r.features.affective.polarity).mean,
                subjectivity_mean: column(&|r| r.features.affective.subjectivity).mean,
            }
        })
        .collect();
    ErrorTaxonomy { groups, confusion }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolaritySign {
    Negative,
    Zero,
    Positive,
}

impl PolaritySign {
    pub fn of(polarity: f64) -> Self {
        if polarity > 0.0 {
            PolaritySign::Positive
        } else if polarity < 0.0 {
            PolaritySign::Negative
        } else {
            PolaritySign::Zero
        }
    }
}

/// Error cell × polarity sign counts over misclassified records, with
/// all-zero columns dropped. `None` when fewer than 2 rows or columns remain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPolarityTable {
    pub rows: Vec<(HumourStyle, HumourStyle)>,
    pub columns: Vec<PolaritySign>,
    pub counts: Vec<Vec<u64>>,
}

pub fn error_polarity_table(records: &[PredictionRecord]) -> Option<ErrorPolarityTable> {
    let mut cells: BTreeMap<(HumourStyle, HumourStyle), BTreeMap<PolaritySign, u64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_error()) {
        let key = (r.gold_label?, r.predicted_label);
        *cells
            .entry(key)
            .or_default()
            .entry(PolaritySign::of(r.features.affective.polarity))
            .or_default() += 1;
    }
    let columns: Vec<PolaritySign> = [PolaritySign::Negative, PolaritySign::Zero, PolaritySign::Positive]
        .into_iter()
        .filter(|s| cells.values().any(|c| c.contains_key(s)))
        .collect();
    if cells.len() < 2 || columns.len() < 2 {
        return None;
    }
    let counts = cells
        .values()
        .map(|c| columns.iter().map(|s| c.get(s).copied().unwrap_or(0)).collect())
        .collect();
    Some(ErrorPolarityTable {
        rows: cells.into_keys().collect(),
        columns,
        counts,
    })
}
