//! Corpus ingestion from CSV (header with `text`, optional `id`, `label`)
//! or JSONL (`{"id"?, "text", "label"?}` per line).

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use risus_core::{Document, HumourStyle};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(CorpusFormat::Csv),
            "jsonl" | "ndjson" => Some(CorpusFormat::Jsonl),
            _ => None,
        }
    }
}

impl std::str::FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(format!("unknown corpus format {other:?} (expected csv or jsonl)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<HumourStyle>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot infer corpus format from {0}; pass --format")]
    UnknownFormat(String),
    #[error("CSV: {0}")]
    Csv(String),
    #[error("CSV header needs a `text` column")]
    MissingTextColumn,
    #[error("corpus is empty")]
    Empty,
    #[error("duplicate id {id:?} on line {line} (first seen on line {first})")]
    DuplicateId { id: String, line: usize, first: usize },
    #[error("{} row(s) rejected:\n{}", .0.len(), format_rejections(.0))]
    Rejected(Vec<Rejection>),
}

fn format_rejections(r: &[Rejection]) -> String {
    r.iter()
        .map(|r| format!("  line {}: {}", r.line, r.message))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Deserialize)]
struct RawRow {
    #[serde(default)]
    id: Option<String>,
    text: String,
    #[serde(default)]
    label: Option<String>,
}

/// Validated rows in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub rows: Vec<CorpusRow>,
}

impl Corpus {
    pub fn documents(&self) -> Vec<Document> {
        self.rows
            .iter()
            .map(|r| Document::new(r.id.clone(), r.text.clone()).with_label(r.label))
            .collect()
    }

    pub fn summary(&self) -> CorpusSummary {
        let mut label_counts: BTreeMap<String, usize> =
            HumourStyle::ALL.iter().map(|s| (s.as_str().to_string(), 0)).collect();
        let mut unlabelled = 0;
        for r in &self.rows {
            match r.label {
                Some(l) => *label_counts.get_mut(l.as_str()).expect("all styles present") += 1,
                None => unlabelled += 1,
            }
        }
        let lengths: Vec<usize> = self.rows.iter().map(|r| r.text.split_whitespace().count()).collect();
        CorpusSummary {
            documents: self.rows.len(),
            label_counts,
            unlabelled,
            min_words: lengths.iter().copied().min().unwrap_or(0),
            max_words: lengths.iter().copied().max().unwrap_or(0),
            mean_words: lengths.iter().sum::<usize>() as f64 / lengths.len().max(1) as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub documents: usize,
    pub label_counts: BTreeMap<String, usize>,
    pub unlabelled: usize,
    pub min_words: usize,
    pub max_words: usize,
    pub mean_words: f64,
}

pub fn ingest(path: &Path, format: Option<CorpusFormat>) -> Result<Corpus, IngestError> {
    let format = format
        .or_else(|| CorpusFormat::from_path(path))
        .ok_or_else(|| IngestError::UnknownFormat(path.display().to_string()))?;
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let raw = match format {
        CorpusFormat::Csv => read_csv(&bytes)?,
        CorpusFormat::Jsonl => read_jsonl(&bytes),
    };
    validate(raw)
}

type Parsed = Vec<(usize, Result<RawRow, String>)>;

fn read_csv(bytes: &[u8]) -> Result<Parsed, IngestError> {
    let mut reader = csv::Reader::from_reader(bytes);
    let headers = reader.headers().map_err(|e| IngestError::Csv(e.to_string()))?.clone();
    if !headers.iter().any(|h| h == "text") {
        return Err(IngestError::MissingTextColumn);
    }
    Ok(reader
        .records()
        .enumerate()
        .map(|(i, rec)| match rec {
            Ok(rec) => {
                let line = rec.position().map_or(i + 2, |p| p.line() as usize);
                (line, rec.deserialize::<RawRow>(Some(&headers)).map_err(|e| e.to_string()))
            }
            Err(e) => {
                let line = e.position().map_or(i + 2, |p| p.line() as usize);
                (line, Err(e.to_string()))
            }
        })
        .collect())
}

fn read_jsonl(bytes: &[u8]) -> Parsed {
    String::from_utf8_lossy(bytes)
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, serde_json::from_str::<RawRow>(l).map_err(|e| format!("malformed JSON: {e}"))))
        .collect()
}

fn validate(raw: Parsed) -> Result<Corpus, IngestError> {
    let mut rejections = Vec::new();
    let mut rows = Vec::new();
    let mut first_line: HashMap<String, usize> = HashMap::new();
    for (line, parsed) in raw {
        let r = match parsed {
            Ok(r) => r,
            Err(message) => {
                rejections.push(Rejection { line, message });
                continue;
            }
        };
        let text = r.text.trim();
        if text.is_empty() {
            rejections.push(Rejection {
                line,
                message: "empty text".into(),
            });
            continue;
        }
        let label = match r.label.as_deref().map(str::trim).filter(|l| !l.is_empty()) {
            None => None,
            Some(l) => match l.parse::<HumourStyle>() {
                Ok(s) => Some(s),
                Err(e) => {
                    rejections.push(Rejection {
                        line,
                        message: e.to_string(),
                    });
                    continue;
                }
            },
        };
        let id = r
            .id
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| format!("line-{line}"));
        if let Some(&first) = first_line.get(&id) {
            return Err(IngestError::DuplicateId { id, line, first });
        }
        first_line.insert(id.clone(), line);
        rows.push(CorpusRow {
            id,
            text: text.to_string(),
            label,
        });
    }
    if !rejections.is_empty() {
        return Err(IngestError::Rejected(rejections));
    }
    if rows.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(Corpus { rows })
}
