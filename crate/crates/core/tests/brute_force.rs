#[path = "support/toy_lexicon.rs"]
mod toy_lexicon;

use risus_core::config::ConflictSimilarity;
use risus_core::contrast::semantic_conflicts;
use risus_core::linguistic::{detect_puns, homophones, rhyme_pairs};
use risus_core::Document;
use toy_lexicon::ToyLexicon;

fn setup() -> (ToyLexicon, Vec<Document>) {
    let toy = ToyLexicon::generate(17);
    let docs = toy
        .documents(50, 23)
        .into_iter()
        .enumerate()
        .map(|(i, t)| Document::new(format!("d{i}"), t))
        .collect();
    (toy, docs)
}

#[test]
fn toy_lexicon_exercises_every_detector() {
    let (toy, docs) = setup();
    let rhymes: usize = docs.iter().map(|d| toy.oracle_rhymes(&d.raw_text).len()).sum();
    let homs: usize = docs.iter().map(|d| toy.oracle_homophones(&d.raw_text).len()).sum();
    let puns: usize = docs.iter().map(|d| toy.oracle_puns(&d.raw_text, 0.2).len()).sum();
    let conflicts: usize = docs.iter().map(|d| toy.oracle_conflicts(&d.raw_text, 0.34).len()).sum();
    assert!(rhymes > 20 && homs > 20 && puns > 5 && conflicts > 20, "{rhymes} {homs} {puns} {conflicts}");
}

#[test]
fn rhymes_match_oracle() {
    let (toy, docs) = setup();
    for d in &docs {
        assert_eq!(rhyme_pairs(d, &toy.dict), toy.oracle_rhymes(&d.raw_text), "{}", d.raw_text);
    }
}

#[test]
fn homophones_match_oracle() {
    let (toy, docs) = setup();
    for d in &docs {
        assert_eq!(homophones(d, &toy.dict, Some(&toy.wordnet)), toy.oracle_homophones(&d.raw_text), "{}", d.raw_text);
    }
}

#[test]
fn puns_match_oracle() {
    let (toy, docs) = setup();
    for threshold in [0.0, 0.2, 0.34] {
        for d in &docs {
            let map = homophones(d, &toy.dict, Some(&toy.wordnet));
            let got: Vec<_> = detect_puns(&map, &toy.wordnet, threshold)
                .into_iter()
                .map(|p| (p.word, p.homophone, p.similarity))
                .collect();
            assert_eq!(got, toy.oracle_puns(&d.raw_text, threshold), "{}", d.raw_text);
        }
    }
}

#[test]
fn conflicts_match_oracle() {
    let (toy, docs) = setup();
    for threshold in [0.125, 0.25, 0.34] {
        for d in &docs {
            let got: Vec<_> = semantic_conflicts(d, &toy.wordnet, &toy.stopwords, threshold, ConflictSimilarity::Rooted)
                .into_iter()
                .map(|p| (p.first, p.second, p.similarity))
                .collect();
            assert_eq!(got, toy.oracle_conflicts(&d.raw_text, threshold), "{}", d.raw_text);
        }
    }
}
