//! Coarse part-of-speech tagger: closed-class word lists, WordNet sense
//! frequencies and suffix heuristics, with a few left-context rules.
//!
//! Accuracy is well below a statistical tagger; it is meant for feature
//! counts, not syntax.

use serde::{Deserialize, Serialize};

use crate::lexicon::{Pos, WordNet};
use crate::text::{Document, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarseTag {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Pronoun,
    Other,
}

impl CoarseTag {
    pub const ALL: [CoarseTag; 6] = [
        CoarseTag::Noun,
        CoarseTag::Verb,
        CoarseTag::Adjective,
        CoarseTag::Adverb,
        CoarseTag::Pronoun,
        CoarseTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CoarseTag::Noun => "noun",
            CoarseTag::Verb => "verb",
            CoarseTag::Adjective => "adjective",
            CoarseTag::Adverb => "adverb",
            CoarseTag::Pronoun => "pronoun",
            CoarseTag::Other => "other",
        }
    }

    /// The WordNet POS for open-class tags.
    pub fn wordnet_pos(self) -> Option<Pos> {
        match self {
            CoarseTag::Noun => Some(Pos::Noun),
            CoarseTag::Verb => Some(Pos::Verb),
            CoarseTag::Adjective => Some(Pos::Adjective),
            CoarseTag::Adverb => Some(Pos::Adverb),
            _ => None,
        }
    }

    pub fn is_content(self) -> bool {
        self.wordnet_pos().is_some()
    }

    fn from_pos(pos: Pos) -> Self {
        match pos {
            Pos::Noun => CoarseTag::Noun,
            Pos::Verb => CoarseTag::Verb,
            Pos::Adjective => CoarseTag::Adjective,
            Pos::Adverb => CoarseTag::Adverb,
        }
    }
}

const PRONOUNS: &[&str] = &[
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves", "you", "your", "yours",
    "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it",
    "its", "itself", "they", "them", "their", "theirs", "themselves", "who", "whom", "whose", "what",
    "u", "ya", "y'all",
];

const SUBJECT_PRONOUNS: &[&str] = &["i", "we", "you", "he", "she", "it", "they", "who", "u"];

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "some", "any", "no", "every", "each", "all",
    "both", "either", "neither", "another", "such", "my", "your", "his", "her", "its", "our", "their",
];

const AUXILIARIES: &[&str] = &[
    "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having", "do",
    "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might", "must", "'m",
    "'re", "'ve", "'ll", "'d", "ca", "wo", "sha", "gonna", "wanna",
];

const FUNCTION_WORDS: &[&str] = &[
    "of", "in", "on", "at", "by", "for", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "to", "from", "up", "down", "out", "off", "over",
    "under", "and", "but", "or", "nor", "yet", "if", "because", "as", "until", "while", "than",
    "though", "although", "since", "unless", "whether", "whereas", "like", "via", "per", "yes",
    "oh", "wow", "lol", "haha", "hey", "ok", "okay", "please", "which", "whatever", "whichever",
];

const ADVERBS: &[&str] = &[
    "not", "n't", "never", "very", "so", "too", "also", "just", "then", "here", "there", "when",
    "where", "why", "how", "again", "once", "now", "always", "often", "still", "already", "even",
    "ever", "only", "really", "almost", "away", "back", "quite", "rather", "soon", "yet",
];

fn closed_class(word: &str) -> Option<CoarseTag> {
    if PRONOUNS.contains(&word) {
        Some(CoarseTag::Pronoun)
    } else if AUXILIARIES.contains(&word) {
        Some(CoarseTag::Verb)
    } else if ADVERBS.contains(&word) {
        Some(CoarseTag::Adverb)
    } else if DETERMINERS.contains(&word) || FUNCTION_WORDS.contains(&word) {
        Some(CoarseTag::Other)
    } else {
        None
    }
}

pub struct Tagger<'a> {
    wordnet: &'a WordNet,
}

impl<'a> Tagger<'a> {
    pub fn new(wordnet: &'a WordNet) -> Self {
        Self { wordnet }
    }

    /// One tag per document token; punctuation and numbers are `Other`.
    pub fn tag(&self, doc: &Document) -> Vec<CoarseTag> {
        let mut tags = Vec::with_capacity(doc.tokens.len());
        for sentence in &doc.sentences {
            let mut prev: Option<(&Token, CoarseTag)> = None;
            for (i, token) in doc.tokens[sentence.clone()].iter().enumerate() {
                let tag = self.tag_token(token, prev, i == 0);
                tags.push(tag);
                if token.is_word_like() {
                    prev = Some((token, tag));
                }
            }
        }
        tags
    }

    fn tag_token(&self, token: &Token, prev: Option<(&Token, CoarseTag)>, initial: bool) -> CoarseTag {
        match token.kind {
            TokenKind::Punct | TokenKind::Number => return CoarseTag::Other,
            TokenKind::Clitic => {
                return match token.lower.as_str() {
                    "n't" => CoarseTag::Adverb,
                    "'s" if matches!(prev, Some((_, CoarseTag::Pronoun))) => CoarseTag::Verb,
                    "'s" => CoarseTag::Other,
                    _ => CoarseTag::Verb,
                }
            }
            TokenKind::Word => {}
        }
        let word = token.lower.as_str();
        if let Some(tag) = closed_class(word) {
            return tag;
        }
        let candidates: Vec<(Pos, u32)> = Pos::ALL
            .iter()
            .filter_map(|&p| self.wordnet.tagged_frequency(word, p).map(|f| (p, f)))
            .collect();
        if candidates.is_empty() {
            return guess_unknown(token, initial);
        }
        let has = |p: Pos| candidates.iter().any(|(c, _)| *c == p);
        let prev_word = prev.map(|(t, _)| t.lower.as_str());

        if prev_word.is_some_and(|w| DETERMINERS.contains(&w)) {
            if has(Pos::Noun) && !(has(Pos::Adjective) && is_adjectival_form(word)) {
                return CoarseTag::Noun;
            }
            if has(Pos::Adjective) {
                return CoarseTag::Adjective;
            }
        }
        if has(Pos::Verb) {
            let after_to = prev_word == Some("to");
            let after_subject = prev_word.is_some_and(|w| SUBJECT_PRONOUNS.contains(&w));
            let after_aux = prev_word.is_some_and(|w| AUXILIARIES.contains(&w));
            if after_to || after_subject || after_aux {
                return CoarseTag::Verb;
            }
        }
        if word.ends_with("ly") && has(Pos::Adverb) {
            return CoarseTag::Adverb;
        }
        if (word.ends_with("ing") || word.ends_with("ed")) && has(Pos::Verb) {
            return CoarseTag::Verb;
        }
        let best = candidates
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
            .expect("non-empty");
        CoarseTag::from_pos(best.0)
    }
}

fn is_adjectival_form(word: &str) -> bool {
    ["est", "ful", "ous", "ive", "able", "ible", "ish", "less", "ic", "ing", "y"]
        .iter()
        .any(|s| word.ends_with(s))
}

fn guess_unknown(token: &Token, initial: bool) -> CoarseTag {
    let w = token.lower.as_str();
    let ends = |suffixes: &[&str]| suffixes.iter().any(|s| w.ends_with(s) && w.len() > s.len() + 1);
    if !initial && token.text.chars().next().is_some_and(char::is_uppercase) {
        CoarseTag::Noun
    } else if ends(&["ly"]) {
        CoarseTag::Adverb
    } else if ends(&["ing", "ed"]) {
        CoarseTag::Verb
    } else if ends(&["ous", "ful", "ive", "able", "ible", "al", "ic", "less", "est", "ish", "y"]) {
        CoarseTag::Adjective
    } else {
        CoarseTag::Noun
    }
}
