//! Per-sense sentiment lexicon in SentiWordNet TSV layout.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::wordnet::{Pos, SynsetId, WordNet};
use super::{byte_lines, decode_line, LoadWarning};

#[derive(Debug, thiserror::Error)]
pub enum SentimentError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("empty sentiment lexicon")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SenseSentiment {
    pub synset_id: SynsetIdRepr,
    pub pos_score: f64,
    pub neg_score: f64,
}

/// Serializable synset reference (`"02084071-n"`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SynsetIdRepr(pub SynsetId);

impl From<SynsetIdRepr> for String {
    fn from(id: SynsetIdRepr) -> String {
        id.0.to_string()
    }
}

impl TryFrom<String> for SynsetIdRepr {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        let (offset, pos) = s.split_once('-').ok_or_else(|| format!("bad synset id {s:?}"))?;
        let pos = Pos::from_code(pos).ok_or_else(|| format!("bad synset pos {s:?}"))?;
        let offset = offset.parse().map_err(|_| format!("bad synset offset {s:?}"))?;
        Ok(SynsetIdRepr(SynsetId { pos, offset }))
    }
}

impl SenseSentiment {
    /// pos − neg.
    pub fn net(&self) -> f64 {
        self.pos_score - self.neg_score
    }

    /// pos + neg, the non-objective mass.
    pub fn subjectivity(&self) -> f64 {
        self.pos_score + self.neg_score
    }
}

#[derive(Debug, Default)]
pub struct SentimentLexicon {
    scores: HashMap<SynsetId, SenseSentiment>,
    /// (lemma, pos) → (sense number, synset), sorted by sense number.
    terms: HashMap<(String, Pos), Vec<(u32, SynsetId)>>,
}

impl SentimentLexicon {
    pub fn load_path(path: &Path) -> Result<(Self, Vec<LoadWarning>), SentimentError> {
        let data = std::fs::read(path).map_err(|source| SentimentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&data, &path.display().to_string())
    }

    /// Parses `POS \t offset \t pos_score \t neg_score \t terms [\t gloss]` rows.
    pub fn parse(data: &[u8], source: &str) -> Result<(Self, Vec<LoadWarning>), SentimentError> {
        let mut lex = SentimentLexicon::default();
        let mut warnings = Vec::new();
        for (no, raw) in byte_lines(data).enumerate() {
            let line = decode_line(raw);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            match parse_row(&line) {
                Ok((sense, terms)) => lex.insert(sense, terms),
                Err(message) => warnings.push(LoadWarning {
                    source: source.to_owned(),
                    line: no + 1,
                    message,
                }),
            }
        }
        if lex.scores.is_empty() {
            return Err(SentimentError::Empty);
        }
        for senses in lex.terms.values_mut() {
            senses.sort_unstable();
        }
        Ok((lex, warnings))
    }

    fn insert(&mut self, sense: SenseSentiment, terms: Vec<(String, u32)>) {
        let id = sense.synset_id.0;
        self.scores.insert(id, sense);
        for (lemma, n) in terms {
            self.terms.entry((lemma, id.pos)).or_default().push((n, id));
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn get(&self, id: SynsetId) -> Option<&SenseSentiment> {
        self.scores.get(&id)
    }

    /// The lowest-numbered sense of `lemma` under `pos`.
    pub fn first_sense(&self, lemma: &str, pos: Pos) -> Option<&SenseSentiment> {
        let senses = self.terms.get(&(lemma.to_owned(), pos))?;
        senses.first().and_then(|(_, id)| self.scores.get(id))
    }

    /// First-listed sense of `word` under `pos`, lemmatizing through `wordnet` when given.
    pub fn word_sense(&self, word: &str, pos: Pos, wordnet: Option<&WordNet>) -> Option<&SenseSentiment> {
        let word = word.to_lowercase();
        if let Some(s) = self.first_sense(&word, pos) {
            return Some(s);
        }
        wordnet?
            .morphy(&word, pos)
            .iter()
            .find_map(|lemma| self.first_sense(lemma, pos))
    }

    /// First-listed sense for every POS under which `word` has an entry.
    pub fn word_senses(&self, word: &str, wordnet: Option<&WordNet>) -> Vec<(Pos, &SenseSentiment)> {
        Pos::ALL
            .iter()
            .filter_map(|&p| self.word_sense(word, p, wordnet).map(|s| (p, s)))
            .collect()
    }
}

fn parse_row(line: &str) -> Result<(SenseSentiment, Vec<(String, u32)>), String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 5 {
        return Err(format!("expected 5 columns, found {}", cols.len()));
    }
    let pos = Pos::from_code(cols[0].trim()).ok_or_else(|| format!("unknown POS {:?}", cols[0]))?;
    let offset: u32 = cols[1].trim().parse().map_err(|_| format!("bad offset {:?}", cols[1]))?;
    let score = |s: &str| -> Result<f64, String> {
        let v: f64 = s.trim().parse().map_err(|_| format!("bad score {s:?}"))?;
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(format!("score {v} outside [0,1]"))
        }
    };
    let pos_score = score(cols[2])?;
    let neg_score = score(cols[3])?;
    if pos_score + neg_score > 1.0 + 1e-9 {
        return Err(format!("pos + neg = {} exceeds 1", pos_score + neg_score));
    }
    let terms = cols[4]
        .split_whitespace()
        .filter_map(|t| {
            let (lemma, n) = t.rsplit_once('#')?;
            Some((lemma.to_lowercase(), n.parse().ok()?))
        })
        .collect();
    let synset_id = SynsetIdRepr(SynsetId { pos, offset });
    Ok((
        SenseSentiment {
            synset_id,
            pos_score,
            neg_score,
        },
        terms,
    ))
}
