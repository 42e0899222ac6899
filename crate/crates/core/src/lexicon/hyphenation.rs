//! Liang hyphenation over TeX-style patterns.
//!
//! Accepts both the OpenOffice `.dic` layout (encoding line, optional
//! `LEFTHYPHENMIN`-style directives, one pattern per line) and TeX
//! `\patterns{...}` / `\hyphenation{...}` blocks.

use std::collections::HashMap;
use std::path::Path;

use super::{byte_lines, decode_line, LoadWarning};

#[derive(Debug, thiserror::Error)]
pub enum HyphenationError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("no hyphenation patterns loaded")]
    Empty,
    #[error("empty word")]
    EmptyWord,
}

#[derive(Debug, Clone, Default)]
pub struct HyphenationPatterns {
    /// Letter string → (offset of first non-zero value, values from there).
    patterns: HashMap<Vec<char>, (usize, Vec<u8>)>,
    max_len: usize,
    /// Word → hyphen positions (char index before which a hyphen may go).
    exceptions: HashMap<String, Vec<usize>>,
    left_min: usize,
    right_min: usize,
}

const DIRECTIVES: [&str; 6] = [
    "LEFTHYPHENMIN",
    "RIGHTHYPHENMIN",
    "COMPOUNDLEFTHYPHENMIN",
    "COMPOUNDRIGHTHYPHENMIN",
    "NEXTLEVEL",
    "NOHYPHEN",
];

#[derive(PartialEq)]
enum Block {
    Patterns,
    Exceptions,
    Other,
}

impl HyphenationPatterns {
    pub fn load_path(path: &Path) -> Result<(Self, Vec<LoadWarning>), HyphenationError> {
        let data = std::fs::read(path).map_err(|source| HyphenationError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&data, &path.display().to_string())
    }

    pub fn parse(data: &[u8], source: &str) -> Result<(Self, Vec<LoadWarning>), HyphenationError> {
        let mut hp = HyphenationPatterns {
            left_min: 2,
            right_min: 2,
            ..Default::default()
        };
        let mut warnings = Vec::new();
        let tex = data.windows(10).any(|w| w == b"\\patterns{");
        let mut block = if tex { Block::Other } else { Block::Patterns };
        let mut seen_charset = false;
        for (no, raw) in byte_lines(data).enumerate() {
            let line = decode_line(raw);
            let line = line.split('%').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if !tex && !seen_charset {
                seen_charset = true;
                continue;
            }
            if DIRECTIVES.iter().any(|d| line.starts_with(d)) || line.starts_with('#') {
                continue;
            }
            for token in line.split_whitespace() {
                let mut token = token;
                if let Some(rest) = token.strip_prefix("\\patterns{") {
                    block = Block::Patterns;
                    token = rest;
                } else if let Some(rest) = token.strip_prefix("\\hyphenation{") {
                    block = Block::Exceptions;
                    token = rest;
                }
                let closes = token.ends_with('}');
                let token = token.trim_end_matches('}');
                if !token.is_empty() {
                    match block {
                        Block::Patterns => {
                            if !hp.add_pattern(token) {
                                warnings.push(LoadWarning {
                                    source: source.to_owned(),
                                    line: no + 1,
                                    message: format!("unusable pattern {token:?}"),
                                });
                            }
                        }
                        Block::Exceptions => hp.add_exception(token),
                        Block::Other => {}
                    }
                }
                if closes && tex {
                    block = Block::Other;
                }
            }
        }
        if hp.patterns.is_empty() {
            return Err(HyphenationError::Empty);
        }
        Ok((hp, warnings))
    }

    /// Overrides the minimum number of letters kept before the first and after the last hyphen.
    pub fn with_margins(mut self, left: usize, right: usize) -> Self {
        self.left_min = left;
        self.right_min = right;
        self
    }

    fn add_pattern(&mut self, token: &str) -> bool {
        let token = token.split('/').next().unwrap_or(token);
        let mut letters = Vec::new();
        let mut values = vec![0u8];
        for c in token.chars() {
            match c.to_digit(10) {
                Some(d) => *values.last_mut().expect("non-empty") = d as u8,
                None => {
                    letters.extend(c.to_lowercase());
                    values.push(0);
                }
            }
        }
        if letters.is_empty() {
            return false;
        }
        let Some(start) = values.iter().position(|&v| v != 0) else {
            return true; // all-zero pattern never affects a level
        };
        let end = values.iter().rposition(|&v| v != 0).expect("has non-zero") + 1;
        self.max_len = self.max_len.max(letters.len());
        self.patterns.insert(letters, (start, values[start..end].to_vec()));
        true
    }

    fn add_exception(&mut self, token: &str) {
        let mut word = String::new();
        let mut points = Vec::new();
        for c in token.chars() {
            if c == '-' {
                points.push(word.chars().count());
            } else {
                word.extend(c.to_lowercase());
            }
        }
        self.exceptions.insert(word, points);
    }

    /// Admissible hyphen positions (char indices before which a hyphen may be inserted).
    pub fn positions(&self, word: &str) -> Result<Vec<usize>, HyphenationError> {
        let lower = word.to_lowercase();
        let len = lower.chars().count();
        if len == 0 {
            return Err(HyphenationError::EmptyWord);
        }
        if let Some(points) = self.exceptions.get(&lower) {
            return Ok(points.clone());
        }
        let pointed: Vec<char> = std::iter::once('.').chain(lower.chars()).chain(std::iter::once('.')).collect();
        let mut levels = vec![0u8; pointed.len() + 1];
        for i in 0..pointed.len() {
            for j in i + 1..=(i + self.max_len).min(pointed.len()) {
                if let Some((offset, values)) = self.patterns.get(&pointed[i..j]) {
                    for (k, &v) in values.iter().enumerate() {
                        let slot = &mut levels[i + offset + k];
                        *slot = (*slot).max(v);
                    }
                }
            }
        }
        Ok(levels
            .iter()
            .enumerate()
            .filter(|(_, &v)| v % 2 == 1)
            .filter_map(|(i, _)| i.checked_sub(1))
            .filter(|&p| p >= self.left_min && p + self.right_min <= len)
            .collect())
    }

    pub fn hyphenation_points(&self, word: &str) -> Result<usize, HyphenationError> {
        self.positions(word).map(|p| p.len())
    }

    /// `hyphenation_points + 1`.
    pub fn syllables(&self, word: &str) -> Result<usize, HyphenationError> {
        self.hyphenation_points(word).map(|p| p + 1)
    }

    /// The word with `-` inserted at every admissible position.
    pub fn hyphenate(&self, word: &str) -> Result<String, HyphenationError> {
        let points = self.positions(word)?;
        let mut out = String::new();
        for (i, c) in word.chars().enumerate() {
            if points.contains(&i) {
                out.push('-');
            }
            out.push(c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // The classic Liang example set.
    const TEX: &str = "\\patterns{\nhy3ph he2n hena4 hen5at 1na n2at 1tio 2io o2n\n}\n\\hyphenation{ ta-ble }\n";

    #[test]
    fn liang_example() {
        let (hp, _) = HyphenationPatterns::parse(TEX.as_bytes(), "t").unwrap();
        assert_eq!(hp.hyphenate("hyphenation").unwrap(), "hy-phen-ation");
        assert_eq!(hp.hyphenate("table").unwrap(), "ta-ble");
    }

    #[test]
    fn dic_layout_skips_header_and_directives() {
        let dic = "UTF-8\nLEFTHYPHENMIN 2\nRIGHTHYPHENMIN 3\n1ba\n";
        let (hp, _) = HyphenationPatterns::parse(dic.as_bytes(), "t").unwrap();
        assert_eq!(hp.hyphenation_points("abababa").unwrap(), 2);
        assert_eq!(hp.hyphenate("abababa").unwrap(), "aba-ba-ba");
    }

    #[test]
    fn margins_suppress_edge_hyphens() {
        let (hp, _) = HyphenationPatterns::parse(b"UTF-8\n1b\n", "t").unwrap();
        assert_eq!(hp.hyphenate("abab").unwrap(), "abab");
        assert_eq!(hp.clone().with_margins(1, 1).hyphenate("abab").unwrap(), "a-ba-b");
    }

    #[test]
    fn empty_word_is_an_error() {
        let (hp, _) = HyphenationPatterns::parse(b"UTF-8\n1b\n", "t").unwrap();
        assert!(matches!(hp.hyphenation_points(""), Err(HyphenationError::EmptyWord)));
    }

    #[test]
    fn empty_pattern_file_is_an_error() {
        assert!(matches!(
            HyphenationPatterns::parse(b"UTF-8\n", "t"),
            Err(HyphenationError::Empty)
        ));
    }
}
