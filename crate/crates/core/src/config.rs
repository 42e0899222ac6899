use serde::{Deserialize, Serialize};

/// What `homonym_count` counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomonymCountMode {
    /// Distinct document word types with at least one homophone.
    #[default]
    WordTypes,
    /// Total homophone matches over distinct word types.
    Matches,
}

/// Similarity used to decide whether two content words conflict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConflictSimilarity {
    /// Best rooted path similarity over all synset pairs, any POS.
    #[default]
    Rooted,
    /// Best strict path similarity over same-POS noun/verb synset pairs; cross-POS-only pairs skipped.
    SamePos,
}

/// Where per-document polarity and subjectivity come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolaritySource {
    /// Sentiment lexicon mean over content tokens.
    #[default]
    Lexicon,
    /// positive − negative and 1 − neutral from the scorer row.
    Scorer,
}

/// Thresholds and switches for per-document feature extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub pun_threshold: f64,
    pub conflict_threshold: f64,
    pub polarity_epsilon: f64,
    pub conflict_similarity: ConflictSimilarity,
    pub homonym_count: HomonymCountMode,
    /// Only accept homophones that have at least one WordNet synset.
    pub homophones_require_synset: bool,
    pub strict_alliteration: bool,
    pub polarity_source: PolaritySource,
}

pub const DEFAULT_CONFLICT_THRESHOLD: f64 = 0.125;

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            pun_threshold: 0.2,
            conflict_threshold: DEFAULT_CONFLICT_THRESHOLD,
            polarity_epsilon: 0.05,
            conflict_similarity: ConflictSimilarity::default(),
            homonym_count: HomonymCountMode::default(),
            homophones_require_synset: true,
            strict_alliteration: false,
            polarity_source: PolaritySource::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{field} = {value} is outside {range}")]
pub struct ConfigRangeError {
    pub field: &'static str,
    pub value: f64,
    pub range: &'static str,
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), ConfigRangeError> {
        let check = |field, value: f64, lo: f64, hi: f64, range| {
            if (lo..=hi).contains(&value) {
                Ok(())
            } else {
                Err(ConfigRangeError { field, value, range })
            }
        };
        check("pun_threshold", self.pun_threshold, 0.0, 1.0, "[0, 1]")?;
        check("conflict_threshold", self.conflict_threshold, 0.0, 1.0, "[0, 1]")?;
        check("polarity_epsilon", self.polarity_epsilon, 0.0, 0.5, "[0, 0.5]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let cfg = AnalysisConfig::default();
        cfg.validate().unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<AnalysisConfig>(&json).unwrap(), cfg);
        let partial: AnalysisConfig = serde_json::from_str(r#"{"conflict_similarity":"same-pos"}"#).unwrap();
        assert_eq!(partial.conflict_similarity, ConflictSimilarity::SamePos);
        assert_eq!(partial.pun_threshold, 0.2);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let cfg = AnalysisConfig {
            pun_threshold: 1.5,
            ..Default::default()
        };
        assert_eq!(cfg.validate().unwrap_err().field, "pun_threshold");
    }
}
