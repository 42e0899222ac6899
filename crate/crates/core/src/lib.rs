//! Humour-style analysis: lexical resources, per-document linguistic,
//! affective and contrast features, a baseline classifier, local
//! perturbation explanations and corpus-level statistics.

pub mod affective;
pub mod analytics;
pub mod classifier;
pub mod config;
pub mod contrast;
pub mod features;
mod http;
pub mod lexicon;
pub mod lime;
pub mod linguistic;
pub mod style;
pub mod tagger;
pub mod text;

pub use config::AnalysisConfig;
pub use style::HumourStyle;
pub use text::{Document, Token, TokenKind};
