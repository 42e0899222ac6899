//! Per-document linguistic pattern features: rhyme, alliteration,
//! homophones and puns, synset ambiguity, syllables, self-reference, POS
//! distribution and a clause-complexity approximation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::config::{AnalysisConfig, HomonymCountMode};
use crate::lexicon::{HyphenationPatterns, Lexicons, Pos, PronouncingDict, WordLists, WordNet};
use crate::tagger::CoarseTag;
use crate::text::{Document, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinguisticError {
    #[error("no syllabifiable content")]
    NoSyllabifiableContent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PunCandidate {
    pub word: String,
    pub homophone: String,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinguisticFeatures {
    pub rhyme_pairs: Vec<(String, String)>,
    pub rhyme_count: usize,
    pub alliteration_groups: BTreeMap<String, Vec<String>>,
    pub alliteration_count: usize,
    pub homophone_map: BTreeMap<String, Vec<String>>,
    pub homonym_count: usize,
    pub pun_candidates: Vec<PunCandidate>,
    pub pun_count: usize,
    pub synset_counts: BTreeMap<String, usize>,
    pub synset_coverage: f64,
    pub syllable_complexity: f64,
    pub self_reference_count: usize,
    pub self_reference_contexts: Vec<String>,
    pub pos_counts: BTreeMap<CoarseTag, usize>,
    pub clause_complexity: usize,
}

impl LinguisticFeatures {
    pub fn extract(
        doc: &Document,
        tags: &[CoarseTag],
        lex: &Lexicons,
        config: &AnalysisConfig,
    ) -> Result<Self, LinguisticError> {
        let rhyme_pairs = rhyme_pairs(doc, &lex.pronouncing);
        let alliteration_groups = alliteration_groups(doc, &lex.pronouncing, config.strict_alliteration);
        let synset_filter = config.homophones_require_synset.then_some(&lex.wordnet);
        let homophone_map = homophones(doc, &lex.pronouncing, synset_filter);
        let pun_candidates = detect_puns(&homophone_map, &lex.wordnet, config.pun_threshold);
        let (synset_counts, synset_coverage) = ambiguity_profile(doc, &lex.wordnet);
        let (self_reference_count, self_reference_contexts) = self_references(doc, &lex.wordlists);
        Ok(Self {
            rhyme_count: rhyme_pairs.len(),
            rhyme_pairs,
            alliteration_count: alliteration_groups.len(),
            alliteration_groups,
            homonym_count: homonym_count(&homophone_map, config.homonym_count),
            homophone_map,
            pun_count: pun_count(&pun_candidates),
            pun_candidates,
            synset_counts,
            synset_coverage,
            syllable_complexity: syllable_complexity(doc, &lex.hyphenation)?,
            self_reference_count,
            self_reference_contexts,
            pos_counts: pos_distribution(doc, tags),
            clause_complexity: clause_complexity(doc, tags, &lex.wordlists),
        })
    }
}

/// Distinct alphabetic word types eligible for phonetic features, in first-occurrence order.
pub fn phonetic_types(doc: &Document) -> Vec<&str> {
    let mut seen = BTreeSet::new();
    doc.tokens
        .iter()
        .filter(|t| t.is_alphabetic())
        .map(|t| t.lower.as_str())
        .filter(|w| seen.insert(*w))
        .collect()
}

/// Unordered rhyming pairs of distinct word types, each as (smaller, larger), sorted.
pub fn rhyme_pairs(doc: &Document, dict: &PronouncingDict) -> Vec<(String, String)> {
    let mut types: Vec<&str> = phonetic_types(doc).into_iter().filter(|w| dict.contains(w)).collect();
    types.sort_unstable();
    let mut pairs = Vec::new();
    for (i, a) in types.iter().enumerate() {
        for b in &types[i + 1..] {
            if dict.rhymes(a, b) {
                pairs.push((a.to_string(), b.to_string()));
            }
        }
    }
    pairs
}

/// Word tokens grouped by the stress-free first phoneme of their primary pronunciation.
///
/// Default mode keeps every token occurrence and ignores distance. Strict mode
/// keeps distinct words that have a same-sound neighbour within five tokens.
pub fn alliteration_groups(doc: &Document, dict: &PronouncingDict, strict: bool) -> BTreeMap<String, Vec<String>> {
    let words: Vec<&Token> = doc.words().collect();
    let keyed: Vec<Option<&'static str>> = words
        .iter()
        .map(|t| {
            if !t.is_alphabetic() {
                return None;
            }
            dict.pronunciations(&t.lower)
                .first()
                .and_then(|p| p.phonemes.first())
                .map(|ph| ph.symbol())
        })
        .collect();
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, key) in keyed.iter().enumerate() {
        let Some(key) = key else { continue };
        let word = &words[i].lower;
        if strict {
            let near = keyed.iter().enumerate().any(|(j, k)| {
                j != i && i.abs_diff(j) <= 5 && *k == Some(*key) && words[j].lower != *word
            });
            let group = groups.entry(key.to_string()).or_default();
            if near && !group.contains(word) {
                group.push(word.clone());
            }
        } else {
            groups.entry(key.to_string()).or_default().push(word.clone());
        }
    }
    groups.retain(|_, g| g.len() >= 2);
    groups
}

/// Homophones per document word type. With `synset_filter`, only homophones
/// that have at least one synset are kept. Candidates must be at least two
/// letters long and purely alphabetic.
pub fn homophones(
    doc: &Document,
    dict: &PronouncingDict,
    synset_filter: Option<&WordNet>,
) -> BTreeMap<String, Vec<String>> {
    phonetic_types(doc)
        .into_iter()
        .filter_map(|w| {
            let matches: Vec<String> = dict
                .homophones(w)
                .into_iter()
                .filter(|h| h.chars().count() >= 2 && h.chars().all(char::is_alphabetic))
                .filter(|h| synset_filter.is_none_or(|wn| !wn.all_senses(h).is_empty()))
                .map(str::to_owned)
                .collect();
            (!matches.is_empty()).then(|| (w.to_owned(), matches))
        })
        .collect()
}

pub fn homonym_count(map: &BTreeMap<String, Vec<String>>, mode: HomonymCountMode) -> usize {
    match mode {
        HomonymCountMode::WordTypes => map.len(),
        HomonymCountMode::Matches => map.values().map(Vec::len).sum(),
    }
}

/// Best strict path similarity over same-POS synset pairs of two words
/// (unlinked pairs count as 0). `None` when the words share no POS.
pub fn same_pos_similarity(wordnet: &WordNet, a: &str, b: &str) -> Option<f64> {
    let mut best: Option<f64> = None;
    for pos in Pos::ALL {
        let (sa, sb) = (wordnet.senses(a, pos), wordnet.senses(b, pos));
        if sa.is_empty() || sb.is_empty() {
            continue;
        }
        let ancestors_b: Vec<_> = sb.iter().map(|&s| wordnet.ancestors(s)).collect();
        for &x in &sa {
            let ax = wordnet.ancestors(x);
            for ay in &ancestors_b {
                let sim = ax
                    .path_distance(ay, false)
                    .map_or(0.0, |d| 1.0 / (1.0 + f64::from(d)));
                best = Some(best.map_or(sim, |b: f64| b.max(sim)));
            }
        }
    }
    best
}

/// Homophone pairs whose meanings are distant: best same-POS path similarity ≤ `threshold`.
pub fn detect_puns(
    homophone_map: &BTreeMap<String, Vec<String>>,
    wordnet: &WordNet,
    threshold: f64,
) -> Vec<PunCandidate> {
    let mut out = Vec::new();
    for (word, homs) in homophone_map {
        for h in homs {
            if let Some(similarity) = same_pos_similarity(wordnet, word, h) {
                if similarity <= threshold {
                    out.push(PunCandidate {
                        word: word.clone(),
                        homophone: h.clone(),
                        similarity,
                    });
                }
            }
        }
    }
    out
}

/// Distinct words with at least one pun candidate.
pub fn pun_count(candidates: &[PunCandidate]) -> usize {
    candidates.iter().map(|c| &c.word).collect::<BTreeSet<_>>().len()
}

/// Synset count per word type (words and numbers) and the fraction with at least one.
pub fn ambiguity_profile(doc: &Document, wordnet: &WordNet) -> (BTreeMap<String, usize>, f64) {
    let counts: BTreeMap<String, usize> = doc
        .tokens
        .iter()
        .filter(|t| matches!(t.kind, TokenKind::Word | TokenKind::Number))
        .map(|t| (t.lower.clone(), 0))
        .collect::<BTreeMap<_, _>>()
        .into_keys()
        .map(|w| {
            let n = wordnet.synsets_of(&w, None).len();
            (w, n)
        })
        .collect();
    let coverage = if counts.is_empty() {
        0.0
    } else {
        counts.values().filter(|&&n| n > 0).count() as f64 / counts.len() as f64
    };
    (counts, coverage)
}

/// Mean of `hyphenation_points + 1` over alphabetic tokens.
pub fn syllable_complexity(doc: &Document, patterns: &HyphenationPatterns) -> Result<f64, LinguisticError> {
    let syllables: Vec<usize> = doc
        .tokens
        .iter()
        .filter(|t| t.is_alphabetic())
        .filter_map(|t| {
            let letters: String = t.lower.chars().filter(|c| c.is_alphabetic()).collect();
            patterns.syllables(&letters).ok()
        })
        .collect();
    if syllables.is_empty() {
        return Err(LinguisticError::NoSyllabifiableContent);
    }
    Ok(syllables.iter().sum::<usize>() as f64 / syllables.len() as f64)
}

/// Occurrences of self-reference terms with their ±3-word windows.
pub fn self_references(doc: &Document, lists: &WordLists) -> (usize, Vec<String>) {
    let words: Vec<&Token> = doc.words().collect();
    let contexts: Vec<String> = words
        .iter()
        .enumerate()
        .filter(|(_, t)| lists.self_reference.contains(&t.lower))
        .map(|(i, _)| {
            let lo = i.saturating_sub(3);
            let hi = (i + 4).min(words.len());
            words[lo..hi].iter().map(|t| t.lower.as_str()).collect::<Vec<_>>().join(" ")
        })
        .collect();
    (contexts.len(), contexts)
}

/// Tag counts over word-like tokens; every coarse tag is present.
pub fn pos_distribution(doc: &Document, tags: &[CoarseTag]) -> BTreeMap<CoarseTag, usize> {
    let mut counts: BTreeMap<CoarseTag, usize> = CoarseTag::ALL.iter().map(|&t| (t, 0)).collect();
    for (token, tag) in doc.tokens.iter().zip(tags) {
        if token.is_word_like() {
            *counts.get_mut(tag).expect("all tags present") += 1;
        }
    }
    counts
}

/// Subordinator matches + "to + verb" sequences + finite verbs beyond the first per sentence.
///
/// A finite verb heads a verb group: a verb-tagged token not ending in -ing
/// whose nearest preceding non-adverb word is neither a verb nor "to".
pub fn clause_complexity(doc: &Document, tags: &[CoarseTag], lists: &WordLists) -> usize {
    let mut total = 0;
    for span in &doc.sentences {
        let words: Vec<(&Token, CoarseTag)> = doc.tokens[span.clone()]
            .iter()
            .zip(&tags[span.clone()])
            .filter(|(t, _)| t.is_word_like())
            .map(|(t, &g)| (t, g))
            .collect();
        let mut finite = 0usize;
        for (i, (token, tag)) in words.iter().enumerate() {
            if lists.subordinator.contains(&token.lower) {
                total += 1;
            }
            if *tag != CoarseTag::Verb {
                continue;
            }
            let prev = words[..i].iter().rev().find(|(_, g)| *g != CoarseTag::Adverb);
            let after_to = prev.is_some_and(|(t, _)| t.lower == "to");
            if after_to {
                total += 1;
            }
            let in_group = prev.is_some_and(|(_, g)| *g == CoarseTag::Verb);
            if !after_to && !in_group && !token.lower.ends_with("ing") {
                finite += 1;
            }
        }
        total += finite.saturating_sub(1);
    }
    total
}
