//! The full per-document feature profile and named numeric views of it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::affective::{lexicon_polarity_subjectivity, AffectError, AffectScores, ScoreRow};
use crate::analytics::{detect_targets, TargetFlags};
use crate::config::{AnalysisConfig, PolaritySource};
use crate::contrast::ContrastFeatures;
use crate::lexicon::Lexicons;
use crate::linguistic::{LinguisticError, LinguisticFeatures};
use crate::tagger::Tagger;
use crate::text::Document;

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("document {0} has no word tokens")]
    EmptyDocument(String),
    #[error("score row id {row} does not match document {doc}")]
    IdMismatch { doc: String, row: String },
    #[error(transparent)]
    Linguistic(#[from] LinguisticError),
    #[error(transparent)]
    Affect(#[from] AffectError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureProfile {
    pub doc_id: String,
    pub linguistic: LinguisticFeatures,
    pub affective: AffectScores,
    pub contrast: ContrastFeatures,
}

/// Extracts the feature profile and target flags for one document.
pub fn analyse_document(
    doc: &Document,
    row: &ScoreRow,
    lex: &Lexicons,
    config: &AnalysisConfig,
) -> Result<(FeatureProfile, TargetFlags), FeatureError> {
    if doc.words().next().is_none() {
        return Err(FeatureError::EmptyDocument(doc.id.clone()));
    }
    if row.id != doc.id {
        return Err(FeatureError::IdMismatch {
            doc: doc.id.clone(),
            row: row.id.clone(),
        });
    }
    let tags = Tagger::new(&lex.wordnet).tag(doc);
    let linguistic = LinguisticFeatures::extract(doc, &tags, lex, config)?;
    let contrast = ContrastFeatures::extract(doc, &tags, lex, config);
    let (polarity, subjectivity) = match config.polarity_source {
        PolaritySource::Lexicon => lexicon_polarity_subjectivity(
            &doc.tokens,
            &lex.sentiment,
            Some(&lex.wordnet),
            &lex.wordlists.stopwords,
        ),
        PolaritySource::Scorer => (row.sentiment.positive - row.sentiment.negative, 1.0 - row.sentiment.neutral),
    };
    let affective = AffectScores::from_row(row, polarity, subjectivity)?;
    let targets = detect_targets(doc, &tags, &lex.wordlists);
    let profile = FeatureProfile {
        doc_id: doc.id.clone(),
        linguistic,
        affective,
        contrast,
    };
    Ok((profile, targets))
}

/// Scalar features available to descriptive tables and correlation matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericFeature {
    SyllableComplexity,
    SemanticConflict,
    Homonym,
    Exaggeration,
    Rhyme,
    Alliteration,
    SelfReference,
    Pun,
    Intensifier,
    SentenceContrast,
    WordContrast,
    ClauseComplexity,
    SynsetCoverage,
    Polarity,
    Subjectivity,
    Sarcasm,
    SentimentStrength,
    EmotionConfidence,
}

impl NumericFeature {
    pub const ALL: [NumericFeature; 18] = [
        NumericFeature::SyllableComplexity,
        NumericFeature::SemanticConflict,
        NumericFeature::Homonym,
        NumericFeature::Exaggeration,
        NumericFeature::Rhyme,
        NumericFeature::Alliteration,
        NumericFeature::SelfReference,
        NumericFeature::Pun,
        NumericFeature::Intensifier,
        NumericFeature::SentenceContrast,
        NumericFeature::WordContrast,
        NumericFeature::ClauseComplexity,
        NumericFeature::SynsetCoverage,
        NumericFeature::Polarity,
        NumericFeature::Subjectivity,
        NumericFeature::Sarcasm,
        NumericFeature::SentimentStrength,
        NumericFeature::EmotionConfidence,
    ];

    /// The linguistic mechanisms compared in the correlation matrices.
    pub const MECHANISMS: [NumericFeature; 7] = [
        NumericFeature::SemanticConflict,
        NumericFeature::Rhyme,
        NumericFeature::Homonym,
        NumericFeature::Exaggeration,
        NumericFeature::Alliteration,
        NumericFeature::SelfReference,
        NumericFeature::Pun,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NumericFeature::SyllableComplexity => "syllable_complexity",
            NumericFeature::SemanticConflict => "semantic_conflict",
            NumericFeature::Homonym => "homonym",
            NumericFeature::Exaggeration => "exaggeration",
            NumericFeature::Rhyme => "rhyme",
            NumericFeature::Alliteration => "alliteration",
            NumericFeature::SelfReference => "self_reference",
            NumericFeature::Pun => "pun",
            NumericFeature::Intensifier => "intensifier",
            NumericFeature::SentenceContrast => "sentence_contrast",
            NumericFeature::WordContrast => "word_contrast",
            NumericFeature::ClauseComplexity => "clause_complexity",
            NumericFeature::SynsetCoverage => "synset_coverage",
            NumericFeature::Polarity => "polarity",
            NumericFeature::Subjectivity => "subjectivity",
            NumericFeature::Sarcasm => "sarcasm",
            NumericFeature::SentimentStrength => "sentiment_strength",
            NumericFeature::EmotionConfidence => "emotion_confidence",
        }
    }

    pub fn value(self, p: &FeatureProfile) -> f64 {
        let (l, c, a) = (&p.linguistic, &p.contrast, &p.affective);
        let count = |n: usize| n as f64;
        match self {
            NumericFeature::SyllableComplexity => l.syllable_complexity,
            NumericFeature::SemanticConflict => count(c.semantic_conflict_count),
            NumericFeature::Homonym => count(l.homonym_count),
            NumericFeature::Exaggeration => count(c.exaggeration_count),
            NumericFeature::Rhyme => count(l.rhyme_count),
            NumericFeature::Alliteration => count(l.alliteration_count),
            NumericFeature::SelfReference => count(l.self_reference_count),
            NumericFeature::Pun => count(l.pun_count),
            NumericFeature::Intensifier => count(c.intensifier_count),
            NumericFeature::SentenceContrast => count(c.sentence_contrast_count),
            NumericFeature::WordContrast => count(c.word_contrast_pairs.len()),
            NumericFeature::ClauseComplexity => count(l.clause_complexity),
            NumericFeature::SynsetCoverage => l.synset_coverage,
            NumericFeature::Polarity => a.polarity,
            NumericFeature::Subjectivity => a.subjectivity,
            NumericFeature::Sarcasm => a.sarcasm_prob,
            NumericFeature::SentimentStrength => a.sentiment_strength,
            NumericFeature::EmotionConfidence => a.emotion_confidence,
        }
    }
}

impl fmt::Display for NumericFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown feature {0:?}")]
pub struct UnknownFeature(pub String);

impl FromStr for NumericFeature {
    type Err = UnknownFeature;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim())
            .ok_or_else(|| UnknownFeature(s.to_string()))
    }
}
