//! WordNet graph loaded from the standard `index.*` / `data.*` / `*.exc` files.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::{byte_lines, decode_line, LoadWarning};

#[derive(Debug, thiserror::Error)]
pub enum WordNetError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("no synsets loaded")]
    Empty,
    #[error("synset {0} listed twice")]
    DuplicateSynset(SynsetId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb];

    pub fn code(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adjective => 'a',
            Pos::Adverb => 'r',
        }
    }

    /// Parses a WordNet POS code; adjective satellites (`s`) map to adjectives.
    pub fn from_code(c: &str) -> Option<Self> {
        match c {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" | "s" => Some(Pos::Adjective),
            "r" => Some(Pos::Adverb),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn file_stem(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adj",
            Pos::Adverb => "adv",
        }
    }

    fn substitutions(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Pos::Noun => &[
                ("s", ""),
                ("ses", "s"),
                ("ves", "f"),
                ("xes", "x"),
                ("zes", "z"),
                ("ches", "ch"),
                ("shes", "sh"),
                ("men", "man"),
                ("ies", "y"),
            ],
            Pos::Verb => &[
                ("s", ""),
                ("ies", "y"),
                ("es", "e"),
                ("es", ""),
                ("ed", "e"),
                ("ed", ""),
                ("ing", "e"),
                ("ing", ""),
            ],
            Pos::Adjective => &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
            Pos::Adverb => &[],
        }
    }
}

/// Synset identifier: byte offset within the POS data file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: u32,
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}-{}", self.offset, self.pos.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    pub lemmas: Vec<String>,
    /// Hypernym and instance-hypernym targets.
    pub hypernyms: Vec<SynsetId>,
    pub satellite: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct IndexEntry {
    senses: Vec<SynsetId>,
    tagged: u32,
}

/// Upward hypernym distances from one synset.
#[derive(Debug, Clone)]
pub struct Ancestors {
    pos: Pos,
    distances: HashMap<SynsetId, u32>,
    max: u32,
}

impl Ancestors {
    pub fn pos(&self) -> Pos {
        self.pos
    }

    pub fn distances(&self) -> &HashMap<SynsetId, u32> {
        &self.distances
    }

    /// Shortest hypernym-path length through a common ancestor. With
    /// `rooted`, both sides also reach a virtual root one step above their
    /// deepest ancestor.
    pub fn path_distance(&self, other: &Ancestors, rooted: bool) -> Option<u32> {
        let (small, large) = if self.distances.len() <= other.distances.len() {
            (self, other)
        } else {
            (other, self)
        };
        let common = small
            .distances
            .iter()
            .filter_map(|(id, d)| large.distances.get(id).map(|e| d + e))
            .min();
        let via_root = rooted.then(|| self.max + 1 + other.max + 1);
        match (common, via_root) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// The loaded lexical-semantic graph.
#[derive(Debug, Default)]
pub struct WordNet {
    synsets: HashMap<SynsetId, Synset>,
    index: [HashMap<String, IndexEntry>; 4],
    exceptions: [HashMap<String, Vec<String>>; 4],
}

impl WordNet {
    /// Loads `index.{noun,verb,adj,adv}`, `data.*` and optional `*.exc` files.
    pub fn load_dir(dir: &Path) -> Result<(Self, Vec<LoadWarning>), WordNetError> {
        let read = |name: String| -> Result<Vec<u8>, WordNetError> {
            let path = dir.join(&name);
            std::fs::read(&path).map_err(|source| WordNetError::Io {
                path: path.display().to_string(),
                source,
            })
        };
        let mut wn = WordNet::default();
        let mut warnings = Vec::new();
        for pos in Pos::ALL {
            let stem = pos.file_stem();
            let data = read(format!("data.{stem}"))?;
            wn.parse_data(pos, &data, &format!("data.{stem}"), &mut warnings)?;
            let index = read(format!("index.{stem}"))?;
            wn.parse_index(pos, &index, &format!("index.{stem}"), &mut warnings);
            if let Ok(exc) = read(format!("{stem}.exc")) {
                wn.exceptions[pos.index()] = parse_exceptions(&exc);
            }
        }
        if wn.synsets.is_empty() {
            return Err(WordNetError::Empty);
        }
        wn.validate(&mut warnings);
        Ok((wn, warnings))
    }

    /// Builds a graph from explicit synsets. Lemma senses are indexed in the given order.
    pub fn from_synsets(
        synsets: impl IntoIterator<Item = Synset>,
    ) -> Result<(Self, Vec<LoadWarning>), WordNetError> {
        let mut wn = WordNet::default();
        for s in synsets {
            for lemma in &s.lemmas {
                let entry = wn.index[s.id.pos.index()].entry(lemma.clone()).or_default();
                if !entry.senses.contains(&s.id) {
                    entry.senses.push(s.id);
                }
            }
            let id = s.id;
            if wn.synsets.insert(id, s).is_some() {
                return Err(WordNetError::DuplicateSynset(id));
            }
        }
        let mut warnings = Vec::new();
        wn.validate(&mut warnings);
        Ok((wn, warnings))
    }

    /// Adds morphological exceptions (`inflected → base forms`) for one POS.
    pub fn with_exceptions(mut self, pos: Pos, exceptions: HashMap<String, Vec<String>>) -> Self {
        self.exceptions[pos.index()] = exceptions;
        self
    }

    fn parse_data(
        &mut self,
        pos: Pos,
        data: &[u8],
        source: &str,
        warnings: &mut Vec<LoadWarning>,
    ) -> Result<(), WordNetError> {
        for (no, raw) in byte_lines(data).enumerate() {
            if raw.starts_with(b"  ") || raw.is_empty() {
                continue;
            }
            let line = decode_line(raw);
            match parse_data_line(&line, pos) {
                Some(s) => {
                    let id = s.id;
                    if self.synsets.insert(id, s).is_some() {
                        return Err(WordNetError::DuplicateSynset(id));
                    }
                }
                None => warnings.push(LoadWarning {
                    source: source.to_owned(),
                    line: no + 1,
                    message: "malformed data line".into(),
                }),
            }
        }
        Ok(())
    }

    fn parse_index(&mut self, pos: Pos, data: &[u8], source: &str, warnings: &mut Vec<LoadWarning>) {
        for (no, raw) in byte_lines(data).enumerate() {
            if raw.starts_with(b"  ") || raw.is_empty() {
                continue;
            }
            let line = decode_line(raw);
            match parse_index_line(&line, pos) {
                Some((lemma, entry)) => {
                    self.index[pos.index()].insert(lemma, entry);
                }
                None => warnings.push(LoadWarning {
                    source: source.to_owned(),
                    line: no + 1,
                    message: "malformed index line".into(),
                }),
            }
        }
    }

    /// Drops dangling references and cycle-closing hypernym edges.
    fn validate(&mut self, warnings: &mut Vec<LoadWarning>) {
        let known: HashSet<SynsetId> = self.synsets.keys().copied().collect();
        let mut warn = |message: String| {
            warnings.push(LoadWarning {
                source: "wordnet".into(),
                line: 0,
                message,
            })
        };
        let mut ids: Vec<SynsetId> = known.iter().copied().collect();
        ids.sort_unstable();
        for id in &ids {
            let s = self.synsets.get_mut(id).expect("known id");
            let before = s.hypernyms.len();
            s.hypernyms.retain(|h| known.contains(h));
            if s.hypernyms.len() != before {
                warn(format!("{id}: dropped dangling hypernym pointer"));
            }
        }
        for table in &mut self.index {
            for (lemma, entry) in table.iter_mut() {
                let before = entry.senses.len();
                entry.senses.retain(|s| known.contains(s));
                if entry.senses.len() != before {
                    warn(format!("{lemma}: dropped unknown sense offset"));
                }
            }
        }
        for (from, to) in self.back_edges(&ids) {
            warn(format!("{from} -> {to}: dropped cycle-closing hypernym edge"));
            if let Some(s) = self.synsets.get_mut(&from) {
                s.hypernyms.retain(|h| *h != to);
            }
        }
    }

    fn back_edges(&self, ids: &[SynsetId]) -> Vec<(SynsetId, SynsetId)> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        let mut marks: HashMap<SynsetId, Mark> = HashMap::new();
        let mut back = Vec::new();
        for &root in ids {
            if marks.contains_key(&root) {
                continue;
            }
            let mut stack: Vec<(SynsetId, usize)> = vec![(root, 0)];
            marks.insert(root, Mark::Active);
            while let Some(&mut (node, ref mut next)) = stack.last_mut() {
                let hypernyms = &self.synsets[&node].hypernyms;
                if *next < hypernyms.len() {
                    let child = hypernyms[*next];
                    *next += 1;
                    match marks.get(&child) {
                        Some(Mark::Active) => back.push((node, child)),
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(child, Mark::Active);
                            stack.push((child, 0));
                        }
                    }
                } else {
                    marks.insert(node, Mark::Done);
                    stack.pop();
                }
            }
        }
        back
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.synsets.get(&id)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    /// Whether `lemma` is an index entry for `pos` (no morphology applied).
    pub fn is_lemma(&self, lemma: &str, pos: Pos) -> bool {
        self.index[pos.index()].contains_key(lemma)
    }

    /// Exception-list base forms for an inflected word.
    pub fn exception_bases(&self, word: &str, pos: Pos) -> &[String] {
        self.exceptions[pos.index()]
            .get(word)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Candidate lemmas of `word` for `pos`: exception lists first, then suffix rules.
    pub fn morphy(&self, word: &str, pos: Pos) -> Vec<String> {
        let form = normalize(word);
        let filter = |forms: Vec<String>| -> Vec<String> {
            let mut out: Vec<String> = Vec::new();
            for f in forms {
                if self.is_lemma(&f, pos) && !out.contains(&f) {
                    out.push(f);
                }
            }
            out
        };
        let apply = |forms: &[String]| -> Vec<String> {
            forms
                .iter()
                .flat_map(|f| {
                    pos.substitutions()
                        .iter()
                        .filter(move |(old, _)| f.ends_with(old))
                        .map(move |(old, new)| format!("{}{}", &f[..f.len() - old.len()], new))
                })
                .collect()
        };
        let exceptions = self.exception_bases(&form, pos);
        if !exceptions.is_empty() {
            let mut forms = vec![form.clone()];
            forms.extend(exceptions.iter().cloned());
            return filter(forms);
        }
        let mut forms = apply(std::slice::from_ref(&form));
        let mut first = vec![form];
        first.extend(forms.iter().cloned());
        let found = filter(first);
        if !found.is_empty() {
            return found;
        }
        while !forms.is_empty() {
            forms = apply(&forms);
            let found = filter(forms.clone());
            if !found.is_empty() {
                return found;
            }
        }
        Vec::new()
    }

    /// Senses of `word` under `pos` in dictionary order (most frequent first).
    pub fn senses(&self, word: &str, pos: Pos) -> Vec<SynsetId> {
        let mut out = Vec::new();
        for form in self.morphy(word, pos) {
            if let Some(entry) = self.index[pos.index()].get(&form) {
                for s in &entry.senses {
                    if !out.contains(s) {
                        out.push(*s);
                    }
                }
            }
        }
        out
    }

    /// Senses across all POS in noun, verb, adjective, adverb order.
    pub fn all_senses(&self, word: &str) -> Vec<SynsetId> {
        Pos::ALL.iter().flat_map(|&p| self.senses(word, p)).collect()
    }

    /// Synsets of `word`, optionally restricted to one POS, ordered by id.
    pub fn synsets_of(&self, word: &str, pos: Option<Pos>) -> Vec<&Synset> {
        let mut ids = match pos {
            Some(p) => self.senses(word, p),
            None => self.all_senses(word),
        };
        ids.sort_unstable();
        ids.iter().filter_map(|id| self.synsets.get(id)).collect()
    }

    /// Sum of sense-tagged frequencies over lemma forms of `word` for `pos`,
    /// or `None` when `word` has no sense under `pos`.
    pub fn tagged_frequency(&self, word: &str, pos: Pos) -> Option<u32> {
        let forms = self.morphy(word, pos);
        if forms.is_empty() {
            return None;
        }
        Some(
            forms
                .iter()
                .filter_map(|f| self.index[pos.index()].get(f))
                .map(|e| e.tagged)
                .sum(),
        )
    }

    /// Minimum upward distance to every hypernym ancestor (including the synset itself).
    pub fn ancestors(&self, id: SynsetId) -> Ancestors {
        let mut memo = HashMap::new();
        let distances = self.closure(id, &mut memo);
        let distances: HashMap<SynsetId, u32> = distances.iter().copied().collect();
        let max = distances.values().copied().max().unwrap_or(0);
        Ancestors {
            pos: id.pos,
            distances,
            max,
        }
    }

    fn closure(
        &self,
        id: SynsetId,
        memo: &mut HashMap<SynsetId, Rc<Vec<(SynsetId, u32)>>>,
    ) -> Rc<Vec<(SynsetId, u32)>> {
        if let Some(done) = memo.get(&id) {
            return Rc::clone(done);
        }
        let mut merged: HashMap<SynsetId, u32> = HashMap::from([(id, 0)]);
        if let Some(s) = self.synsets.get(&id) {
            for &h in &s.hypernyms {
                for &(a, d) in self.closure(h, memo).iter() {
                    let e = merged.entry(a).or_insert(u32::MAX);
                    *e = (*e).min(d + 1);
                }
            }
        }
        let result = Rc::new(merged.into_iter().collect::<Vec<_>>());
        memo.insert(id, Rc::clone(&result));
        result
    }

    /// `1 / (1 + d)` for the shortest hypernym path `d` between same-POS
    /// synsets. `None` for cross-POS or unconnected pairs.
    pub fn path_similarity(&self, a: SynsetId, b: SynsetId) -> Option<f64> {
        if a.pos != b.pos {
            return None;
        }
        let d = self.ancestors(a).path_distance(&self.ancestors(b), false)?;
        Some(1.0 / (1.0 + f64::from(d)))
    }

    /// Like [`path_similarity`](Self::path_similarity), but pairs involving a
    /// non-noun are joined through a virtual root, so every pair gets a score.
    pub fn rooted_path_similarity(&self, a: SynsetId, b: SynsetId) -> Option<f64> {
        let rooted = !(a.pos == Pos::Noun && b.pos == Pos::Noun);
        let d = self.ancestors(a).path_distance(&self.ancestors(b), rooted)?;
        Some(1.0 / (1.0 + f64::from(d)))
    }
}

fn normalize(word: &str) -> String {
    word.trim().to_lowercase().replace(' ', "_")
}

fn strip_marker(word: &str) -> &str {
    match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    }
}

fn parse_data_line(line: &str, pos: Pos) -> Option<Synset> {
    let body = line.split(" | ").next().unwrap_or(line);
    let mut fields = body.split_ascii_whitespace();
    let offset: u32 = fields.next()?.parse().ok()?;
    let _lex_file = fields.next()?;
    let ss_type = fields.next()?;
    let w_cnt = usize::from_str_radix(fields.next()?, 16).ok()?;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        let word = fields.next()?;
        let _lex_id = fields.next()?;
        lemmas.push(strip_marker(word).to_lowercase());
    }
    let p_cnt: usize = fields.next()?.parse().ok()?;
    let mut hypernyms = Vec::new();
    for _ in 0..p_cnt {
        let symbol = fields.next()?;
        let target: u32 = fields.next()?.parse().ok()?;
        let target_pos = Pos::from_code(fields.next()?)?;
        let _source_target = fields.next()?;
        if symbol == "@" || symbol == "@i" {
            hypernyms.push(SynsetId {
                pos: target_pos,
                offset: target,
            });
        }
    }
    Some(Synset {
        id: SynsetId { pos, offset },
        lemmas,
        hypernyms,
        satellite: ss_type == "s",
    })
}

fn parse_index_line(line: &str, pos: Pos) -> Option<(String, IndexEntry)> {
    let mut fields = line.split_ascii_whitespace();
    let lemma = fields.next()?.to_lowercase();
    let _pos = fields.next()?;
    let synset_cnt: usize = fields.next()?.parse().ok()?;
    let p_cnt: usize = fields.next()?.parse().ok()?;
    for _ in 0..p_cnt {
        fields.next()?;
    }
    let _sense_cnt = fields.next()?;
    let tagged: u32 = fields.next()?.parse().ok()?;
    let senses = (0..synset_cnt)
        .map(|_| fields.next()?.parse().ok().map(|offset| SynsetId { pos, offset }))
        .collect::<Option<Vec<_>>>()?;
    Some((lemma, IndexEntry { senses, tagged }))
}

fn parse_exceptions(data: &[u8]) -> HashMap<String, Vec<String>> {
    byte_lines(data)
        .filter_map(|raw| {
            let line = decode_line(raw);
            let mut words = line.split_ascii_whitespace().map(str::to_owned);
            let inflected = words.next()?;
            let bases: Vec<String> = words.collect();
            (!bases.is_empty()).then_some((inflected, bases))
        })
        .collect()
}
