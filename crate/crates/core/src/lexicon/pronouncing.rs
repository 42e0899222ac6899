//! CMU-format pronouncing dictionary.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{byte_lines, decode_line, LoadWarning};

const SYMBOLS: [&str; 39] = [
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH", "EH", "ER", "EY", "F", "G", "HH",
    "IH", "IY", "JH", "K", "L", "M", "N", "NG", "OW", "OY", "P", "R", "S", "SH", "T", "TH", "UH",
    "UW", "V", "W", "Y", "Z", "ZH",
];

const UNSTRESSED: u8 = u8::MAX;

#[derive(Debug, thiserror::Error)]
pub enum PronouncingError {
    #[error("empty lexicon")]
    Empty,
    #[error("no rhyme part in pronunciation of {0:?}")]
    NoRhymePart(String),
    #[error("invalid phoneme {0:?}")]
    InvalidPhoneme(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// One ARPAbet phoneme. Vowels carry a stress level of 0, 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phoneme {
    symbol: u8,
    stress: u8,
}

impl Phoneme {
    pub fn symbol(&self) -> &'static str {
        SYMBOLS[self.symbol as usize]
    }

    pub fn is_vowel(&self) -> bool {
        matches!(self.symbol().as_bytes()[0], b'A' | b'E' | b'I' | b'O' | b'U')
    }

    pub fn stress(&self) -> Option<u8> {
        (self.stress != UNSTRESSED).then_some(self.stress)
    }

    /// Primary or secondary stress.
    pub fn is_stressed(&self) -> bool {
        matches!(self.stress(), Some(1 | 2))
    }
}

impl FromStr for Phoneme {
    type Err = PronouncingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || PronouncingError::InvalidPhoneme(s.to_owned());
        let (base, stress) = match s.as_bytes().last() {
            Some(d @ b'0'..=b'2') => (&s[..s.len() - 1], d - b'0'),
            _ => (s, UNSTRESSED),
        };
        let symbol = SYMBOLS.iter().position(|&p| p == base).ok_or_else(invalid)? as u8;
        let phoneme = Phoneme { symbol, stress };
        if phoneme.is_vowel() != (stress != UNSTRESSED) {
            return Err(invalid());
        }
        Ok(phoneme)
    }
}

impl fmt::Display for Phoneme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stress() {
            Some(s) => write!(f, "{}{}", self.symbol(), s),
            None => f.write_str(self.symbol()),
        }
    }
}

/// A word's pronunciation as an ordered phoneme sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pronunciation {
    pub word: String,
    pub phonemes: Vec<Phoneme>,
}

impl Pronunciation {
    pub fn parse(word: &str, phonemes: &str) -> Result<Self, PronouncingError> {
        let phonemes = phonemes
            .split_whitespace()
            .map(Phoneme::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        if phonemes.is_empty() {
            return Err(PronouncingError::InvalidPhoneme(String::new()));
        }
        Ok(Self {
            word: word.to_lowercase(),
            phonemes,
        })
    }

    /// Phonemes from the last primary/secondary-stressed vowel onward. When no
    /// vowel carries stress the whole pronunciation is the rhyme part.
    pub fn rhyme_tail(&self) -> Result<&[Phoneme], PronouncingError> {
        if !self.phonemes.iter().any(Phoneme::is_vowel) {
            return Err(PronouncingError::NoRhymePart(self.word.clone()));
        }
        let start = self.phonemes.iter().rposition(Phoneme::is_stressed).unwrap_or(0);
        Ok(&self.phonemes[start..])
    }

    pub fn phoneme_string(&self) -> String {
        let parts: Vec<String> = self.phonemes.iter().map(ToString::to_string).collect();
        parts.join(" ")
    }

    /// Canonical dictionary line. `variant` is 0 for the primary pronunciation.
    pub fn format_line(&self, variant: usize) -> String {
        let head = self.word.to_uppercase();
        match variant {
            0 => format!("{head}  {}", self.phoneme_string()),
            n => format!("{head}({})  {}", n + 1, self.phoneme_string()),
        }
    }
}

/// Summary of a dictionary load.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub entries: usize,
    pub words: usize,
    pub warnings: Vec<LoadWarning>,
}

/// Case-insensitive word → pronunciation variants index.
#[derive(Debug, Clone, Default)]
pub struct PronouncingDict {
    entries: BTreeMap<String, Vec<Pronunciation>>,
    by_sound: HashMap<Vec<Phoneme>, Vec<String>>,
}

impl PronouncingDict {
    pub fn load_path(path: &Path) -> Result<(Self, Vec<LoadWarning>), PronouncingError> {
        let data = std::fs::read(path).map_err(|source| PronouncingError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let (dict, report) = Self::parse(&data, &path.display().to_string())?;
        Ok((dict, report.warnings))
    }

    /// Parses CMU-dict text. Malformed lines become warnings.
    pub fn parse(data: &[u8], source: &str) -> Result<(Self, LoadReport), PronouncingError> {
        let mut entries: BTreeMap<String, Vec<Pronunciation>> = BTreeMap::new();
        let mut report = LoadReport::default();
        for (no, raw) in byte_lines(data).enumerate() {
            let line = decode_line(raw);
            let line = match line.find(" #") {
                Some(i) => &line[..i],
                None => &line[..],
            };
            let line = line.trim();
            if line.is_empty() || line.starts_with(";;;") {
                continue;
            }
            let mut warn = |message: String| {
                report.warnings.push(LoadWarning {
                    source: source.to_owned(),
                    line: no + 1,
                    message,
                })
            };
            let Some((head, rest)) = line.split_once(char::is_whitespace) else {
                warn(format!("no phonemes in line {line:?}"));
                continue;
            };
            let word = strip_variant(head);
            match Pronunciation::parse(word, rest) {
                Ok(p) => {
                    report.entries += 1;
                    entries.entry(p.word.clone()).or_default().push(p);
                }
                Err(e) => warn(format!("{e} in line {line:?}")),
            }
        }
        if entries.is_empty() {
            return Err(PronouncingError::Empty);
        }
        report.words = entries.len();
        Ok((Self::from_entries(entries), report))
    }

    fn from_entries(entries: BTreeMap<String, Vec<Pronunciation>>) -> Self {
        let mut by_sound: HashMap<Vec<Phoneme>, Vec<String>> = HashMap::new();
        for (word, variants) in &entries {
            for p in variants {
                let words = by_sound.entry(p.phonemes.clone()).or_default();
                if words.last() != Some(word) {
                    words.push(word.clone());
                }
            }
        }
        Self { entries, by_sound }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(&word.to_lowercase())
    }

    /// All variants of `word`, primary first. Empty for unknown words.
    pub fn pronunciations(&self, word: &str) -> &[Pronunciation] {
        self.entries
            .get(&word.to_lowercase())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Whether any variant of `a` shares a rhyme tail with any variant of `b`.
    pub fn rhymes(&self, a: &str, b: &str) -> bool {
        let tails = |w: &str| -> Vec<&[Phoneme]> {
            self.pronunciations(w)
                .iter()
                .filter_map(|p| p.rhyme_tail().ok())
                .collect()
        };
        let ta = tails(a);
        tails(b).iter().any(|t| ta.contains(t))
    }

    /// Other spellings sharing a full phoneme sequence with any variant of `word`, sorted.
    pub fn homophones(&self, word: &str) -> Vec<&str> {
        let word = word.to_lowercase();
        let mut out: Vec<&str> = self
            .pronunciations(&word)
            .iter()
            .filter_map(|p| self.by_sound.get(&p.phonemes))
            .flatten()
            .map(String::as_str)
            .filter(|w| *w != word)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Serializes the index in canonical dictionary format.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        for variants in self.entries.values() {
            for (i, p) in variants.iter().enumerate() {
                out.push_str(&p.format_line(i));
                out.push('\n');
            }
        }
        out
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

fn strip_variant(head: &str) -> &str {
    match head.strip_suffix(')').and_then(|h| h.rsplit_once('(')) {
        Some((base, n)) if !base.is_empty() && n.bytes().all(|b| b.is_ascii_digit()) => base,
        _ => head,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dict(text: &str) -> PronouncingDict {
        PronouncingDict::parse(text.as_bytes(), "test").unwrap().0
    }

    #[test]
    fn parses_well_formed_line() {
        let d = dict("CAT  K AE1 T\n");
        let p = &d.pronunciations("Cat")[0];
        assert_eq!(p.word, "cat");
        assert_eq!(p.phoneme_string(), "K AE1 T");
        assert_eq!(p.rhyme_tail().unwrap().len(), 2);
    }

    #[test]
    fn skips_comments_and_groups_variants() {
        let (d, report) = PronouncingDict::parse(
            b";;; comment\nTOMATO  T AH0 M EY1 T OW2\nTOMATO(2)  T AH0 M AA1 T OW2\n",
            "test",
        )
        .unwrap();
        assert_eq!(report.entries, 2);
        assert_eq!(report.words, 1);
        assert_eq!(d.pronunciations("tomato").len(), 2);
    }

    #[test]
    fn malformed_lines_warn_without_aborting() {
        let (d, report) =
            PronouncingDict::parse(b"CAT  K AE1 T\nDOG  D QQ1 G\nLONELY\nK  K EY1\n", "t").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(report.warnings.len(), 2);
        assert_eq!(report.warnings[0].line, 2);
    }

    #[test]
    fn empty_stream_is_an_error() {
        assert!(matches!(
            PronouncingDict::parse(b";;; only comments\n", "t"),
            Err(PronouncingError::Empty)
        ));
    }

    #[test]
    fn stressed_vowel_required_for_vowel_symbols() {
        assert!("AE".parse::<Phoneme>().is_err());
        assert!("K1".parse::<Phoneme>().is_err());
        assert_eq!("ER0".parse::<Phoneme>().unwrap().stress(), Some(0));
    }

    #[test]
    fn rhyme_tail_rules() {
        let d = dict("MOTHER  M AH1 DH ER0\nTO  T AH0\nTHE  DH AH0\nHMM  HH M\n");
        let tail = d.pronunciations("mother")[0].rhyme_tail().unwrap();
        assert_eq!(tail.iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["AH1", "DH", "ER0"]);
        assert!(!d.rhymes("to", "the"));
        assert!(matches!(
            d.pronunciations("hmm")[0].rhyme_tail(),
            Err(PronouncingError::NoRhymePart(_))
        ));
    }

    #[test]
    fn homophones_exclude_self_and_are_sorted() {
        let d = dict("JEANS  JH IY1 N Z\nGENES  JH IY1 N Z\nJEAN'S  JH IY1 N Z\nCAT  K AE1 T\n");
        assert_eq!(d.homophones("genes"), vec!["jean's", "jeans"]);
        assert!(d.homophones("cat").is_empty());
    }

    #[test]
    fn canonical_round_trip() {
        let text = "A  AH0\nA(2)  EY1\nCAT  K AE1 T\n";
        let d = dict(text);
        assert_eq!(d.to_canonical_string(), text);
        assert_eq!(dict(&d.to_canonical_string()).to_canonical_string(), text);
    }

    const SAMPLE: &[&str] = &["K AE1 T", "HH AE1 T", "D AO1 G", "B IY1", "S IY1", "M AH1 DH ER0", "T AH0"];

    proptest! {
        #[test]
        fn format_parse_format_is_stable(idx in prop::collection::vec(0..SAMPLE.len(), 1..4), variant in 0usize..3) {
            let phones: Vec<&str> = idx.iter().map(|&i| SAMPLE[i]).collect();
            let p = Pronunciation::parse("word", &phones.join(" ")).unwrap();
            let line = p.format_line(variant);
            let d = dict(&line);
            let reparsed = &d.pronunciations("word")[0];
            prop_assert_eq!(reparsed.format_line(variant), line);
        }

        #[test]
        fn rhyme_equivalence_relation(a in 0..SAMPLE.len(), b in 0..SAMPLE.len(), c in 0..SAMPLE.len()) {
            let p = |i: usize| Pronunciation::parse("w", SAMPLE[i]).unwrap();
            let (pa, pb, pc) = (p(a), p(b), p(c));
            let (ta, tb, tc) = (pa.rhyme_tail().unwrap(), pb.rhyme_tail().unwrap(), pc.rhyme_tail().unwrap());
            prop_assert_eq!(ta, ta);
            prop_assert_eq!(ta == tb, tb == ta);
            if ta == tb && tb == tc {
                prop_assert_eq!(ta, tc);
            }
        }
    }
}
