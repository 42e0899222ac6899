//! Bundled term lists. Each list is one lowercase term per line with `#` comments.

use std::collections::BTreeSet;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum WordListError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("terms {0:?} appear in both the self-reference and second/third-person lists")]
    Overlap(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordLists {
    pub self_reference: BTreeSet<String>,
    pub exaggeration: BTreeSet<String>,
    pub intensifier: BTreeSet<String>,
    pub subordinator: BTreeSet<String>,
    pub second_third_person: BTreeSet<String>,
    pub person_nouns: BTreeSet<String>,
    pub stopwords: BTreeSet<String>,
}

const DEFAULT_SELF: &str = include_str!("../../../../resources/wordlists/self_reference.txt");
const DEFAULT_EXAGGERATION: &str = include_str!("../../../../resources/wordlists/exaggeration.txt");
const DEFAULT_INTENSIFIER: &str = include_str!("../../../../resources/wordlists/intensifier.txt");
const DEFAULT_SUBORDINATOR: &str = include_str!("../../../../resources/wordlists/subordinator.txt");
const DEFAULT_OTHER: &str = include_str!("../../../../resources/wordlists/second_third_person.txt");
const DEFAULT_PERSON: &str = include_str!("../../../../resources/wordlists/person_nouns.txt");
const DEFAULT_STOPWORDS: &str = include_str!("../../../../resources/wordlists/stopwords.txt");

/// Parses one term per line, ignoring blank lines and `#` comments.
pub fn parse_terms(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .collect()
}

impl Default for WordLists {
    fn default() -> Self {
        Self {
            self_reference: parse_terms(DEFAULT_SELF),
            exaggeration: parse_terms(DEFAULT_EXAGGERATION),
            intensifier: parse_terms(DEFAULT_INTENSIFIER),
            subordinator: parse_terms(DEFAULT_SUBORDINATOR),
            second_third_person: parse_terms(DEFAULT_OTHER),
            person_nouns: parse_terms(DEFAULT_PERSON),
            stopwords: parse_terms(DEFAULT_STOPWORDS),
        }
    }
}

impl WordLists {
    /// Reads `<name>.txt` overrides from `dir`; lists without a file keep their defaults.
    pub fn load_dir(dir: &Path) -> Result<Self, WordListError> {
        let mut lists = Self::default();
        let slots: [(&str, &mut BTreeSet<String>); 7] = [
            ("self_reference", &mut lists.self_reference),
            ("exaggeration", &mut lists.exaggeration),
            ("intensifier", &mut lists.intensifier),
            ("subordinator", &mut lists.subordinator),
            ("second_third_person", &mut lists.second_third_person),
            ("person_nouns", &mut lists.person_nouns),
            ("stopwords", &mut lists.stopwords),
        ];
        for (name, slot) in slots {
            let path = dir.join(format!("{name}.txt"));
            match std::fs::read_to_string(&path) {
                Ok(text) => *slot = parse_terms(&text),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(source) => {
                    return Err(WordListError::Io {
                        path: path.display().to_string(),
                        source,
                    })
                }
            }
        }
        lists.validate()?;
        Ok(lists)
    }

    pub fn validate(&self) -> Result<(), WordListError> {
        let overlap: Vec<String> = self
            .self_reference
            .intersection(&self.second_third_person)
            .cloned()
            .collect();
        if overlap.is_empty() {
            Ok(())
        } else {
            Err(WordListError::Overlap(overlap))
        }
    }
}
