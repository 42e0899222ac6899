//! Contrast features: sentiment reversals between and within sentences,
//! absolutes and intensifiers, and semantically distant word pairs.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::affective::{lexicon_polarity_subjectivity, word_polarity};
use crate::config::{AnalysisConfig, ConflictSimilarity};
use crate::lexicon::{Ancestors, Lexicons, Pos, SentimentLexicon, SynsetId, WordLists, WordNet};
use crate::tagger::CoarseTag;
use crate::text::{Document, Token};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordContrast {
    pub sentence: usize,
    pub positive: String,
    pub negative: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConflictPair {
    pub first: String,
    pub second: String,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastFeatures {
    pub sentence_contrast_count: usize,
    pub word_contrast_pairs: Vec<WordContrast>,
    pub exaggeration_count: usize,
    pub intensifier_count: usize,
    pub semantic_conflict_count: usize,
    pub semantic_conflict_pairs: Vec<ConflictPair>,
}

impl ContrastFeatures {
    pub fn extract(doc: &Document, tags: &[CoarseTag], lex: &Lexicons, config: &AnalysisConfig) -> Self {
        let wn = Some(&lex.wordnet);
        let stop = &lex.wordlists.stopwords;
        let eps = config.polarity_epsilon;
        let polarity = |tokens: &[Token]| lexicon_polarity_subjectivity(tokens, &lex.sentiment, wn, stop).0;
        let word_contrast_pairs = doc
            .sentences
            .iter()
            .enumerate()
            .flat_map(|(i, range)| {
                word_contrast_pairs(&doc.tokens[range.clone()], &tags[range.clone()], &lex.sentiment, wn, eps)
                    .into_iter()
                    .map(move |(positive, negative)| WordContrast {
                        sentence: i,
                        positive,
                        negative,
                    })
            })
            .collect();
        let semantic_conflict_pairs = semantic_conflicts(
            doc,
            &lex.wordnet,
            stop,
            config.conflict_threshold,
            config.conflict_similarity,
        );
        Self {
            sentence_contrast_count: sentence_contrast_count(doc, polarity, eps),
            word_contrast_pairs,
            exaggeration_count: exaggeration_count(doc, tags, &lex.wordnet, &lex.wordlists),
            intensifier_count: intensifier_count(doc, &lex.wordlists),
            semantic_conflict_count: semantic_conflict_pairs.len(),
            semantic_conflict_pairs,
        }
    }
}

fn sign(value: f64, eps: f64) -> i8 {
    if value > eps {
        1
    } else if value < -eps {
        -1
    } else {
        0
    }
}

/// Adjacent sentence pairs whose polarities fall on opposite sides of the ±`eps` band.
pub fn sentence_contrast_count(doc: &Document, polarity: impl Fn(&[Token]) -> f64, eps: f64) -> usize {
    let signs: Vec<i8> = (0..doc.sentence_count())
        .map(|i| sign(polarity(doc.sentence(i)), eps))
        .collect();
    signs.windows(2).filter(|w| w[0] * w[1] == -1).count()
}

/// All (positive, negative) combinations of distinct content-word types in one sentence.
pub fn word_contrast_pairs(
    sentence: &[Token],
    tags: &[CoarseTag],
    lexicon: &SentimentLexicon,
    wordnet: Option<&WordNet>,
    eps: f64,
) -> Vec<(String, String)> {
    let mut seen = BTreeSet::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (t, tag) in sentence.iter().zip(tags) {
        if !tag.is_content() || !t.is_alphabetic() || !seen.insert(t.lower.as_str()) {
            continue;
        }
        match word_polarity(&t.lower, lexicon, wordnet).map(|(net, _)| sign(net, eps)) {
            Some(1) => pos.push(t.lower.clone()),
            Some(-1) => neg.push(t.lower.clone()),
            _ => {}
        }
    }
    pos.iter()
        .flat_map(|p| neg.iter().map(move |n| (p.clone(), n.clone())))
        .collect()
}

/// Superlative adjective forms: irregular ones from the exception list, or
/// regular "-est" forms reducing to a different adjective lemma.
pub fn is_superlative(word: &str, wordnet: &WordNet) -> bool {
    if matches!(word, "most" | "least") || !word.ends_with("st") {
        return false;
    }
    if wordnet.exception_bases(word, Pos::Adjective).iter().any(|b| b != word) {
        return true;
    }
    word.ends_with("est")
        && !wordnet.is_lemma(word, Pos::Adjective)
        && !wordnet.is_lemma(word, Pos::Noun)
        && wordnet.morphy(word, Pos::Adjective).iter().any(|b| b != word)
}

/// Absolute terms from the word list, superlatives, and "most/least + adjective"
/// bigrams (each bigram counted once).
pub fn exaggeration_count(doc: &Document, tags: &[CoarseTag], wordnet: &WordNet, lists: &WordLists) -> usize {
    let mut count = 0;
    let mut skip_next = false;
    for (i, t) in doc.tokens.iter().enumerate() {
        if std::mem::take(&mut skip_next) {
            continue;
        }
        let w = t.lower.as_str();
        if matches!(w, "most" | "least") {
            let next_adj = doc
                .tokens
                .get(i + 1)
                .is_some_and(|n| tags[i + 1] == CoarseTag::Adjective || wordnet.is_lemma(&n.lower, Pos::Adjective));
            if next_adj {
                count += 1;
                skip_next = true;
                continue;
            }
        }
        if lists.exaggeration.contains(w) || (t.is_alphabetic() && is_superlative(w, wordnet)) {
            count += 1;
        }
    }
    count
}

pub fn intensifier_count(doc: &Document, lists: &WordLists) -> usize {
    doc.tokens.iter().filter(|t| lists.intensifier.contains(&t.lower)).count()
}

/// Candidate word types for conflict detection, in first-occurrence order.
fn conflict_candidates(doc: &Document, wordnet: &WordNet, stopwords: &BTreeSet<String>, mode: ConflictSimilarity) -> Vec<(String, Vec<SynsetId>)> {
    let mut seen = BTreeSet::new();
    doc.tokens
        .iter()
        .filter(|t| t.is_alphabetic() && !stopwords.contains(&t.lower))
        .filter(|t| seen.insert(t.lower.clone()))
        .filter_map(|t| {
            let senses: Vec<SynsetId> = match mode {
                ConflictSimilarity::Rooted => wordnet.all_senses(&t.lower),
                ConflictSimilarity::SamePos => [Pos::Noun, Pos::Verb]
                    .iter()
                    .flat_map(|&p| wordnet.senses(&t.lower, p))
                    .collect(),
            };
            (!senses.is_empty()).then(|| (t.lower.clone(), senses))
        })
        .collect()
}

/// Best similarity between two sense sets, or `None` when the mode has no
/// comparable pair (same-POS mode with no shared POS).
fn best_similarity(
    a: &[SynsetId],
    b: &[SynsetId],
    ancestors: &HashMap<SynsetId, Ancestors>,
    mode: ConflictSimilarity,
) -> Option<f64> {
    let mut best: Option<f64> = None;
    for x in a {
        for y in b {
            let d = match mode {
                ConflictSimilarity::Rooted => {
                    let rooted = !(x.pos == Pos::Noun && y.pos == Pos::Noun);
                    ancestors[x].path_distance(&ancestors[y], rooted)
                }
                ConflictSimilarity::SamePos if x.pos == y.pos => {
                    Some(ancestors[x].path_distance(&ancestors[y], false).unwrap_or(u32::MAX))
                }
                ConflictSimilarity::SamePos => continue,
            };
            let sim = d.map_or(0.0, |d| if d == u32::MAX { 0.0 } else { 1.0 / (1.0 + f64::from(d)) });
            best = Some(best.map_or(sim, |b: f64| b.max(sim)));
        }
    }
    best
}

/// Unordered pairs of distinct candidate words whose best similarity is ≤ `threshold`.
pub fn semantic_conflicts(
    doc: &Document,
    wordnet: &WordNet,
    stopwords: &BTreeSet<String>,
    threshold: f64,
    mode: ConflictSimilarity,
) -> Vec<ConflictPair> {
    let candidates = conflict_candidates(doc, wordnet, stopwords, mode);
    let ancestors: HashMap<SynsetId, Ancestors> = candidates
        .iter()
        .flat_map(|(_, s)| s.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|id| (id, wordnet.ancestors(id)))
        .collect();
    let mut out = Vec::new();
    for (i, (a, sa)) in candidates.iter().enumerate() {
        for (b, sb) in &candidates[i + 1..] {
            if let Some(similarity) = best_similarity(sa, sb, &ancestors, mode) {
                if similarity <= threshold {
                    out.push(ConflictPair {
                        first: a.clone(),
                        second: b.clone(),
                        similarity,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::wordnet::tests::synset;
    use proptest::prelude::*;

    fn lists() -> WordLists {
        WordLists::default()
    }

    fn toy_sentiment() -> SentimentLexicon {
        let tsv = "v\t1\t0.625\t0\tlove#1\nv\t2\t0\t0.625\thate#1\nv\t3\t0.5\t0\tadore#1\n\
                   a\t4\t0.75\t0\thappy#1\na\t5\t0\t0.5\tembarrassing#1\n";
        SentimentLexicon::parse(tsv.as_bytes(), "t").unwrap().0
    }

    fn polarity_of(lex: &SentimentLexicon) -> impl Fn(&[Token]) -> f64 + '_ {
        move |toks: &[Token]| lexicon_polarity_subjectivity(toks, lex, None, &lists().stopwords).0
    }

    #[test]
    fn sentence_contrasts() {
        let lex = toy_sentiment();
        let count = |text: &str| sentence_contrast_count(&Document::new("t", text), polarity_of(&lex), 0.05);
        assert_eq!(count("I love this."), 0);
        assert_eq!(count("I love this. I hate this."), 1);
        assert_eq!(count("I love this. I adore this."), 0);
        assert_eq!(count("I love this. I hate this. I love it."), 2);
    }

    #[test]
    fn word_contrasts_need_both_signs() {
        let lex = toy_sentiment();
        let doc = Document::new("t", "the happiest day was embarrassing");
        let tags = vec![CoarseTag::Other, CoarseTag::Adjective, CoarseTag::Noun, CoarseTag::Verb, CoarseTag::Adjective];
        let wn = WordNet::from_synsets([synset(Pos::Adjective, 4, &["happy"], &[])])
            .unwrap()
            .0
            .with_exceptions(Pos::Adjective, HashMap::from([("happiest".to_string(), vec!["happy".to_string()])]));
        let pairs = word_contrast_pairs(&doc.tokens, &tags, &lex, Some(&wn), 0.05);
        assert_eq!(pairs, [("happiest".to_string(), "embarrassing".to_string())]);
        let pos_only = Document::new("t", "happy love");
        assert!(word_contrast_pairs(&pos_only.tokens, &[CoarseTag::Adjective, CoarseTag::Verb], &lex, None, 0.05).is_empty());
    }

    fn toy_adjectives() -> WordNet {
        WordNet::from_synsets([
            synset(Pos::Adjective, 1, &["happy"], &[]),
            synset(Pos::Adjective, 2, &["large"], &[]),
            synset(Pos::Adjective, 3, &["good"], &[]),
            synset(Pos::Noun, 4, &["forest"], &[]),
            synset(Pos::Adjective, 5, &["fore"], &[]),
        ])
        .unwrap()
        .0
        .with_exceptions(
            Pos::Adjective,
            HashMap::from([
                ("happiest".to_string(), vec!["happy".to_string()]),
                ("best".to_string(), vec!["good".to_string()]),
            ]),
        )
    }

    #[test]
    fn exaggeration_examples() {
        let wn = toy_adjectives();
        let count = |text: &str| {
            let doc = Document::new("t", text);
            let tags = vec![CoarseTag::Other; doc.tokens.len()];
            exaggeration_count(&doc, &tags, &wn, &lists())
        };
        assert_eq!(count("never ever always"), 3);
        assert_eq!(count("a quiet cat"), 0);
        assert_eq!(count("the largest and best and happiest"), 3);
        assert_eq!(count("the most happy forest"), 1);
        assert_eq!(count("most cats"), 0);
    }

    #[test]
    fn intensifiers_match_the_list() {
        let count = |text: &str| intensifier_count(&Document::new("t", text), &lists());
        assert_eq!(count("very very good"), 2);
        assert_eq!(count("fine"), 0);
        assert_eq!(count("So I was really, totally and utterly done. Very."), 5);
    }

    /// entity ← {object ← {food, garment}, act ← wearing}; verbs wear, eat unlinked.
    fn toy_graph() -> WordNet {
        WordNet::from_synsets([
            synset(Pos::Noun, 1, &["entity"], &[]),
            synset(Pos::Noun, 2, &["object"], &[1]),
            synset(Pos::Noun, 3, &["food"], &[2]),
            synset(Pos::Noun, 4, &["garment"], &[2]),
            synset(Pos::Noun, 5, &["act"], &[1]),
            synset(Pos::Noun, 6, &["wearing"], &[5]),
            synset(Pos::Verb, 7, &["wear"], &[]),
            synset(Pos::Verb, 8, &["eat"], &[]),
            synset(Pos::Adjective, 9, &["fave"], &[]),
        ])
        .unwrap()
        .0
    }

    #[test]
    fn conflicts_by_mode() {
        let wn = toy_graph();
        let doc = Document::new("t", "the food and the garment and wearing");
        let stop = lists().stopwords;
        let pairs = semantic_conflicts(&doc, &wn, &stop, 0.2, ConflictSimilarity::Rooted);
        // food–garment d=2 (1/3), food–wearing d=4 (1/5), garment–wearing d=4.
        let names: Vec<_> = pairs.iter().map(|p| (p.first.as_str(), p.second.as_str())).collect();
        assert_eq!(names, [("food", "wearing"), ("garment", "wearing")]);

        let doc = Document::new("t", "wear eat fave food");
        let rooted = semantic_conflicts(&doc, &wn, &stop, 1.0, ConflictSimilarity::Rooted);
        assert_eq!(rooted.len(), 6);
        let same = semantic_conflicts(&doc, &wn, &stop, 1.0, ConflictSimilarity::SamePos);
        assert_eq!(same.len(), 1, "only wear/eat share a POS; fave has no noun/verb sense");
        assert_eq!(same[0].similarity, 0.0);
        assert_eq!(semantic_conflicts(&Document::new("t", "food"), &wn, &stop, 1.0, ConflictSimilarity::Rooted).len(), 0);
    }

    proptest! {
        #[test]
        fn conflict_count_is_monotone_in_threshold(
            words in prop::collection::vec(prop::sample::select(vec!["entity", "object", "food", "garment", "act", "wearing", "wear", "eat", "fave"]), 0..9),
            lo in 0.0f64..1.0,
            hi in 0.0f64..1.0,
        ) {
            let wn = toy_graph();
            let stop = lists().stopwords;
            let doc = Document::new("t", words.join(" "));
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            for mode in [ConflictSimilarity::Rooted, ConflictSimilarity::SamePos] {
                let a = semantic_conflicts(&doc, &wn, &stop, lo, mode);
                let b = semantic_conflicts(&doc, &wn, &stop, hi, mode);
                prop_assert!(a.len() <= b.len());
                prop_assert!(b.iter().all(|p| p.similarity <= hi && p.first != p.second));
                let keys: BTreeSet<_> = b.iter().map(|p| (p.first.clone(), p.second.clone())).collect();
                prop_assert_eq!(keys.len(), b.len());
            }
        }

        #[test]
        fn sentence_contrast_ignores_within_sentence_order(
            first in prop::collection::vec(prop::sample::select(vec!["love", "hate", "cat", "adore"]), 1..6),
            second in prop::collection::vec(prop::sample::select(vec!["love", "hate", "cat", "adore"]), 1..6),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let lex = toy_sentiment();
            let text = |a: &[&str], b: &[&str]| format!("{}. {}.", a.join(" "), b.join(" "));
            let base = sentence_contrast_count(&Document::new("t", text(&first, &second)), polarity_of(&lex), 0.05);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (mut f, mut s) = (first.clone(), second.clone());
            f.shuffle(&mut rng);
            s.shuffle(&mut rng);
            let doc = Document::new("t", text(&f, &s));
            prop_assert!(base <= doc.sentence_count().saturating_sub(1));
            prop_assert_eq!(sentence_contrast_count(&doc, polarity_of(&lex), 0.05), base);
        }
    }
}
