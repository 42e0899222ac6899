use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The five classes, in the fixed order used by every probability vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HumourStyle {
    Affiliative,
    Aggressive,
    Neutral,
    SelfDeprecating,
    SelfEnhancing,
}

impl HumourStyle {
    pub const ALL: [HumourStyle; 5] = [
        HumourStyle::Affiliative,
        HumourStyle::Aggressive,
        HumourStyle::Neutral,
        HumourStyle::SelfDeprecating,
        HumourStyle::SelfEnhancing,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Wire name, e.g. `self_deprecating`.
    pub fn as_str(self) -> &'static str {
        match self {
            HumourStyle::Affiliative => "affiliative",
            HumourStyle::Aggressive => "aggressive",
            HumourStyle::Neutral => "neutral",
            HumourStyle::SelfDeprecating => "self_deprecating",
            HumourStyle::SelfEnhancing => "self_enhancing",
        }
    }

    /// Human-readable name for tables, e.g. `Self-deprecating`.
    pub fn display_name(self) -> &'static str {
        match self {
            HumourStyle::Affiliative => "Affiliative",
            HumourStyle::Aggressive => "Aggressive",
            HumourStyle::Neutral => "Neutral",
            HumourStyle::SelfDeprecating => "Self-deprecating",
            HumourStyle::SelfEnhancing => "Self-enhancing",
        }
    }
}

impl fmt::Display for HumourStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown humour style {0:?} (expected affiliative, aggressive, neutral, self_deprecating or self_enhancing)")]
pub struct UnknownStyle(pub String);

impl FromStr for HumourStyle {
    type Err = UnknownStyle;

    /// Accepts wire names plus common spellings (`Self-enhancing`, `self enhancing`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .trim()
            .to_lowercase()
            .chars()
            .map(|c| if c == '-' || c == ' ' { '_' } else { c })
            .collect();
        Self::ALL
            .into_iter()
            .find(|style| style.as_str() == key)
            .ok_or_else(|| UnknownStyle(s.to_owned()))
    }
}
