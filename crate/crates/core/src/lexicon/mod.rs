//! Read-only lexical resources: pronunciations, the WordNet graph, per-sense
//! sentiment scores, hyphenation patterns and bundled word lists.
//!
//! Every store is immutable after construction and can be shared freely
//! between threads.

pub mod hyphenation;
pub mod pronouncing;
pub mod sentiment;
pub mod wordlists;
pub mod wordnet;

use std::fmt;
use std::path::{Path, PathBuf};

pub use hyphenation::{HyphenationError, HyphenationPatterns};
pub use pronouncing::{Phoneme, PronouncingDict, PronouncingError, Pronunciation};
pub use sentiment::{SenseSentiment, SentimentError, SentimentLexicon};
pub use wordlists::{WordListError, WordLists};
pub use wordnet::{Ancestors, Pos, Synset, SynsetId, WordNet, WordNetError};

/// A non-fatal problem found while loading a resource. The offending line is skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadWarning {
    pub source: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LoadWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.source, self.line, self.message)
    }
}

/// Decodes one line as UTF-8, falling back to Latin-1 byte-for-char mapping.
pub(crate) fn decode_line(bytes: &[u8]) -> String {
    match std::str::from_utf8(bytes) {
        Ok(s) => s.to_owned(),
        Err(_) => bytes.iter().map(|&b| b as char).collect(),
    }
}

/// Splits a byte buffer into lines, dropping a trailing `\r` from each.
pub(crate) fn byte_lines(data: &[u8]) -> impl Iterator<Item = &[u8]> {
    let trimmed = data.strip_suffix(b"\n").unwrap_or(data);
    trimmed
        .split(|&b| b == b'\n')
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
        .filter(move |_| !data.is_empty())
}

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error(transparent)]
    Pronouncing(#[from] PronouncingError),
    #[error(transparent)]
    WordNet(#[from] WordNetError),
    #[error(transparent)]
    Sentiment(#[from] SentimentError),
    #[error(transparent)]
    Hyphenation(#[from] HyphenationError),
    #[error(transparent)]
    WordList(#[from] WordListError),
}

/// File locations of every resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourcePaths {
    pub pronouncing: PathBuf,
    pub wordnet: PathBuf,
    pub sentiment: PathBuf,
    pub hyphenation: PathBuf,
    /// Directory of word-list overrides; missing files fall back to the built-in lists.
    pub wordlists: Option<PathBuf>,
}

impl ResourcePaths {
    /// Standard layout of the shipped `resources/` directory.
    pub fn under(root: impl AsRef<Path>) -> Self {
        let root = root.as_ref();
        Self {
            pronouncing: root.join("cmudict/cmudict.dict"),
            wordnet: root.join("wordnet"),
            sentiment: root.join("sentiwordnet/sentiwordnet.tsv"),
            hyphenation: root.join("hyphen/hyph_en_US.dic"),
            wordlists: Some(root.join("wordlists")),
        }
    }
}

/// All lexical resources the analyzers need.
#[derive(Debug)]
pub struct Lexicons {
    pub pronouncing: PronouncingDict,
    pub wordnet: WordNet,
    pub sentiment: SentimentLexicon,
    pub hyphenation: HyphenationPatterns,
    pub wordlists: WordLists,
}

impl Lexicons {
    pub fn load(paths: &ResourcePaths) -> Result<(Self, Vec<LoadWarning>), LexiconError> {
        let mut warnings = Vec::new();
        let (pronouncing, w) = PronouncingDict::load_path(&paths.pronouncing)?;
        warnings.extend(w);
        let (wordnet, w) = WordNet::load_dir(&paths.wordnet)?;
        warnings.extend(w);
        let (sentiment, w) = SentimentLexicon::load_path(&paths.sentiment)?;
        warnings.extend(w);
        let (hyphenation, w) = HyphenationPatterns::load_path(&paths.hyphenation)?;
        warnings.extend(w);
        let wordlists = match &paths.wordlists {
            Some(dir) => WordLists::load_dir(dir)?,
            None => WordLists::default(),
        };
        Ok((
            Self {
                pronouncing,
                wordnet,
                sentiment,
                hyphenation,
                wordlists,
            },
            warnings,
        ))
    }
}
