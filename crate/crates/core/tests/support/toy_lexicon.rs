//! A seeded 50-word toy lexicon with hand-rolled phonetics and a small
//! hypernym forest, plus exhaustive pairwise reference detectors that read
//! the generator's own tables rather than the library's indexes.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use risus_core::lexicon::{Pos, PronouncingDict, Synset, SynsetId, WordNet};

pub const WORDS: usize = 50;
const CONSONANTS: [&str; 4] = ["B", "D", "K", "M"];
const VOWELS: [&str; 3] = ["AA", "IY", "OW"];

pub struct ToyLexicon {
    pub words: Vec<String>,
    /// Pronunciation variants per word, each a phoneme list with stress digits.
    pub sounds: BTreeMap<String, Vec<Vec<String>>>,
    pub senses: BTreeMap<String, Vec<SynsetId>>,
    pub hypernyms: HashMap<SynsetId, Vec<SynsetId>>,
    pub stopwords: BTreeSet<String>,
    pub dict: PronouncingDict,
    pub wordnet: WordNet,
}

fn spelling(i: usize) -> String {
    const ONSETS: [&str; 10] = ["b", "d", "g", "k", "l", "m", "n", "p", "r", "t"];
    const NUCLEI: [&str; 4] = ["a", "i", "o", "u"];
    let first = format!("{}{}", ONSETS[i % 10], NUCLEI[(i / 10) % 4]);
    let second = format!("{}{}", ONSETS[(i * 7 + 3) % 10], NUCLEI[(i / 40 + i) % 4]);
    format!("{first}{second}")
}

fn random_sound(rng: &mut ChaCha8Rng) -> Vec<String> {
    let len = rng.gen_range(1..=3);
    (0..len)
        .map(|k| {
            if k % 2 == 1 || (len == 1 && rng.gen_bool(0.3)) {
                CONSONANTS.choose(rng).unwrap().to_string()
            } else {
                format!("{}{}", VOWELS.choose(rng).unwrap(), rng.gen_range(0..=1))
            }
        })
        .collect()
}

fn forest(pos: Pos, base: u32, count: u32, rng: &mut ChaCha8Rng) -> Vec<(SynsetId, Vec<SynsetId>)> {
    let ids: Vec<SynsetId> = (0..count).map(|k| SynsetId { pos, offset: base + k }).collect();
    ids.iter()
        .enumerate()
        .map(|(k, &id)| {
            let parents = if k >= 2 && rng.gen_bool(0.8) && pos != Pos::Adjective {
                let mut p = vec![ids[rng.gen_range(0..k)]];
                if rng.gen_bool(0.15) {
                    p.push(ids[rng.gen_range(0..k)]);
                    p.dedup();
                }
                p
            } else {
                vec![]
            };
            (id, parents)
        })
        .collect()
}

impl ToyLexicon {
    pub fn generate(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words: Vec<String> = (0..WORDS).map(spelling).collect();
        assert_eq!(words.iter().collect::<BTreeSet<_>>().len(), WORDS);
        let sounds: BTreeMap<String, Vec<Vec<String>>> = words
            .iter()
            .map(|w| {
                let n = if rng.gen_bool(0.2) { 2 } else { 1 };
                let mut variants: Vec<Vec<String>> = (0..n).map(|_| random_sound(&mut rng)).collect();
                variants.dedup();
                (w.clone(), variants)
            })
            .collect();

        let mut graph = forest(Pos::Noun, 100, 20, &mut rng);
        graph.extend(forest(Pos::Verb, 200, 10, &mut rng));
        graph.extend(forest(Pos::Adjective, 300, 5, &mut rng));
        let ids: Vec<SynsetId> = graph.iter().map(|(id, _)| *id).collect();
        let senses: BTreeMap<String, Vec<SynsetId>> = words
            .iter()
            .map(|w| {
                let k = rng.gen_range(0..=3);
                let mut s: Vec<SynsetId> = ids.choose_multiple(&mut rng, k).copied().collect();
                s.sort_unstable();
                (w.clone(), s)
            })
            .collect();
        let hypernyms: HashMap<SynsetId, Vec<SynsetId>> = graph.iter().cloned().collect();
        let stopwords: BTreeSet<String> = words.iter().step_by(9).cloned().collect();

        let mut text = String::new();
        for (w, variants) in &sounds {
            for (v, phones) in variants.iter().enumerate() {
                let head = if v == 0 { w.to_uppercase() } else { format!("{}({})", w.to_uppercase(), v + 1) };
                text.push_str(&format!("{head}  {}\n", phones.join(" ")));
            }
        }
        let dict = PronouncingDict::parse(text.as_bytes(), "toy").unwrap().0;
        let synsets = graph.iter().map(|(id, parents)| Synset {
            id: *id,
            lemmas: senses.iter().filter(|(_, s)| s.contains(id)).map(|(w, _)| w.clone()).collect(),
            hypernyms: parents.clone(),
            satellite: false,
        });
        let wordnet = WordNet::from_synsets(synsets).unwrap().0;
        Self {
            words,
            sounds,
            senses,
            hypernyms,
            stopwords,
            dict,
            wordnet,
        }
    }

    /// Space-joined random words, 1–10 tokens, sometimes with a full stop.
    pub fn documents(&self, count: usize, seed: u64) -> Vec<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let n = rng.gen_range(1..=10);
                let mut toks: Vec<String> = (0..n).map(|_| self.words.choose(&mut rng).unwrap().clone()).collect();
                if n > 3 && rng.gen_bool(0.3) {
                    toks[1].push('.');
                }
                toks.join(" ")
            })
            .collect()
    }

    fn tail(phones: &[String]) -> &[String] {
        let start = phones.iter().rposition(|p| p.ends_with('1') || p.ends_with('2')).unwrap_or(0);
        &phones[start..]
    }

    pub fn rhymes(&self, a: &str, b: &str) -> bool {
        self.sounds[a]
            .iter()
            .any(|x| self.sounds[b].iter().any(|y| Self::tail(x) == Self::tail(y)))
    }

    /// Sorted alphabetically.
    pub fn homophones_of(&self, w: &str) -> Vec<String> {
        let mut sorted = self.words.clone();
        sorted.sort();
        sorted
            .iter()
            .filter(|v| *v != w && !self.senses[*v].is_empty())
            .filter(|v| self.sounds[w].iter().any(|x| self.sounds[*v].contains(x)))
            .cloned()
            .collect()
    }

    fn upward(&self, id: SynsetId) -> HashMap<SynsetId, u32> {
        let mut dist = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([id]);
        while let Some(s) = queue.pop_front() {
            for &h in &self.hypernyms[&s] {
                if !dist.contains_key(&h) {
                    dist.insert(h, dist[&s] + 1);
                    queue.push_back(h);
                }
            }
        }
        dist
    }

    fn common_distance(&self, a: SynsetId, b: SynsetId) -> Option<u32> {
        let (da, db) = (self.upward(a), self.upward(b));
        da.iter().filter_map(|(k, d)| db.get(k).map(|e| d + e)).min()
    }

    fn depth(&self, a: SynsetId) -> u32 {
        self.upward(a).into_values().max().unwrap()
    }

    /// Best same-POS similarity, unlinked pairs 0; `None` when no POS is shared.
    pub fn same_pos_similarity(&self, a: &str, b: &str) -> Option<f64> {
        let mut best: Option<f64> = None;
        for &x in &self.senses[a] {
            for &y in self.senses[b].iter().filter(|y| y.pos == x.pos) {
                let s = self.common_distance(x, y).map_or(0.0, |d| 1.0 / (1.0 + f64::from(d)));
                best = Some(best.map_or(s, |v: f64| v.max(s)));
            }
        }
        best
    }

    /// Best similarity over all sense pairs; non-noun pairs may also meet at a virtual root.
    pub fn rooted_similarity(&self, a: &str, b: &str) -> f64 {
        let mut best = 0.0f64;
        for &x in &self.senses[a] {
            for &y in &self.senses[b] {
                let common = self.common_distance(x, y);
                let d = if x.pos == Pos::Noun && y.pos == Pos::Noun {
                    common
                } else {
                    let root = self.depth(x) + self.depth(y) + 2;
                    Some(common.map_or(root, |c| c.min(root)))
                };
                best = best.max(d.map_or(0.0, |d| 1.0 / (1.0 + f64::from(d))));
            }
        }
        best
    }

    fn types(&self, text: &str) -> Vec<String> {
        let mut seen = BTreeSet::new();
        text.split_whitespace()
            .map(|t| t.trim_end_matches('.').to_string())
            .filter(|t| seen.insert(t.clone()))
            .collect()
    }

    pub fn oracle_rhymes(&self, text: &str) -> Vec<(String, String)> {
        let mut types = self.types(text);
        types.sort();
        let mut out = Vec::new();
        for i in 0..types.len() {
            for j in i + 1..types.len() {
                if self.rhymes(&types[i], &types[j]) {
                    out.push((types[i].clone(), types[j].clone()));
                }
            }
        }
        out
    }

    pub fn oracle_homophones(&self, text: &str) -> BTreeMap<String, Vec<String>> {
        self.types(text)
            .into_iter()
            .filter_map(|w| {
                let h = self.homophones_of(&w);
                (!h.is_empty()).then_some((w, h))
            })
            .collect()
    }

    pub fn oracle_puns(&self, text: &str, threshold: f64) -> Vec<(String, String, f64)> {
        let mut out = Vec::new();
        for (w, hs) in self.oracle_homophones(text) {
            for h in hs {
                if let Some(s) = self.same_pos_similarity(&w, &h) {
                    if s <= threshold {
                        out.push((w.clone(), h, s));
                    }
                }
            }
        }
        out
    }

    pub fn oracle_conflicts(&self, text: &str, threshold: f64) -> Vec<(String, String, f64)> {
        let cands: Vec<String> = self
            .types(text)
            .into_iter()
            .filter(|w| !self.stopwords.contains(w) && !self.senses[w].is_empty())
            .collect();
        let mut out = Vec::new();
        for i in 0..cands.len() {
            for j in i + 1..cands.len() {
                let s = self.rooted_similarity(&cands[i], &cands[j]);
                if s <= threshold {
                    out.push((cands[i].clone(), cands[j].clone(), s));
                }
            }
        }
        out
    }
}
