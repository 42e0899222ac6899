//! Documents, tokens and sentence segmentation.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

use crate::style::HumourStyle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Number,
    /// Contracted suffix split from its host (`'m`, `n't`, `'s`, ...).
    Clitic,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Original casing.
    pub text: String,
    /// Lowercased, with typographic apostrophes folded to `'`.
    pub lower: String,
    pub kind: TokenKind,
    /// Byte range in the raw text.
    pub span: Range<usize>,
}

impl Token {
    pub fn is_word_like(&self) -> bool {
        self.kind != TokenKind::Punct
    }

    /// Letters only, allowing internal apostrophes (`o'clock`).
    pub fn is_alphabetic(&self) -> bool {
        self.kind == TokenKind::Word
            && self.lower.chars().all(|c| c.is_alphabetic() || c == '\'')
            && self.lower.chars().any(char::is_alphabetic)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub raw_text: String,
    pub tokens: Vec<Token>,
    /// Token index ranges, partitioning `tokens` in order.
    pub sentences: Vec<Range<usize>>,
    pub gold_label: Option<HumourStyle>,
}

const CLITICS: [&str; 6] = ["'m", "'re", "'ve", "'ll", "'d", "'s"];

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let raw_text = text.into();
        let (tokens, sentences) = tokenize(&raw_text);
        Self {
            id: id.into(),
            raw_text,
            tokens,
            sentences,
            gold_label: None,
        }
    }

    pub fn with_label(mut self, label: Option<HumourStyle>) -> Self {
        self.gold_label = label;
        self
    }

    /// Non-punctuation tokens.
    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word_like())
    }

    pub fn sentence(&self, i: usize) -> &[Token] {
        &self.tokens[self.sentences[i].clone()]
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    /// Distinct lowercase word-like types in first-occurrence order.
    pub fn word_types(&self) -> Vec<&str> {
        let mut seen = std::collections::HashSet::new();
        self.words()
            .map(|t| t.lower.as_str())
            .filter(|w| seen.insert(*w))
            .collect()
    }

    /// Tokens joined with single spaces wherever the raw text had whitespace.
    pub fn reconstruct(&self) -> String {
        let mut out = String::new();
        let mut prev_end = None;
        for t in &self.tokens {
            if let Some(end) = prev_end {
                if end < t.span.start {
                    out.push(' ');
                }
            }
            out.push_str(&t.text);
            prev_end = Some(t.span.end);
        }
        out
    }
}

/// Collapses whitespace runs to single spaces and trims.
pub fn normalize_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn tokenize(raw: &str) -> (Vec<Token>, Vec<Range<usize>>) {
    let mut tokens = Vec::new();
    let mut sentences = Vec::new();
    for (s_start, sentence) in raw.split_sentence_bound_indices() {
        let first = tokens.len();
        for (w_start, segment) in sentence.split_word_bound_indices() {
            if segment.chars().all(char::is_whitespace) {
                continue;
            }
            push_segment(&mut tokens, segment, s_start + w_start);
        }
        if tokens.len() > first {
            sentences.push(first..tokens.len());
        }
    }
    (tokens, sentences)
}

fn push_segment(tokens: &mut Vec<Token>, segment: &str, start: usize) {
    let make = |text: &str, start: usize, kind| Token {
        text: text.to_owned(),
        lower: text.to_lowercase().replace('\u{2019}', "'"),
        kind,
        span: start..start + text.len(),
    };
    if !segment.chars().any(char::is_alphanumeric) {
        tokens.push(make(segment, start, TokenKind::Punct));
        return;
    }
    let is_number = segment.chars().any(|c| c.is_numeric())
        && segment.chars().all(|c| c.is_numeric() || c == '.' || c == ',');
    if is_number {
        tokens.push(make(segment, start, TokenKind::Number));
        return;
    }
    match clitic_split(segment) {
        Some(at) => {
            tokens.push(make(&segment[..at], start, TokenKind::Word));
            tokens.push(make(&segment[at..], start + at, TokenKind::Clitic));
        }
        None => tokens.push(make(segment, start, TokenKind::Word)),
    }
}

/// Byte index where a contracted suffix begins, if any.
fn clitic_split(word: &str) -> Option<usize> {
    let folded: Vec<char> = word.to_lowercase().replace('\u{2019}', "'").chars().collect();
    let suffix_chars = if folded.ends_with(&['n', '\'', 't']) {
        3
    } else {
        CLITICS
            .iter()
            .find(|c| folded.ends_with(&c.chars().collect::<Vec<_>>()))
            .map(|c| c.chars().count())?
    };
    if folded.len() <= suffix_chars {
        return None;
    }
    let (at, _) = word.char_indices().rev().nth(suffix_chars - 1)?;
    Some(at)
}
