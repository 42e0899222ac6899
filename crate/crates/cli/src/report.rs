//! Single-file HTML report: corpus summary, the style tables, correlation
//! heatmaps and per-document explanation bars, all as inline markup.

use std::collections::BTreeSet;
use std::fmt::Write;

use risus_core::analytics::{CorrelationMatrix, PredictionRecord};
use risus_core::features::NumericFeature;
use risus_core::lime::Explanation;
use risus_core::HumourStyle;
use serde::{Deserialize, Serialize};

use crate::pipeline::Analytics;
use crate::tables::{emotion_columns, group_title, COMPLEXITY_FEATURES};

pub const BAR_MAX_WIDTH: f64 = 150.0;
const BAR_CENTER: f64 = 320.0;
const BAR_HEIGHT: f64 = 18.0;
const POSITIVE: &str = "#2e7d32";
const NEGATIVE: &str = "#c62828";

#[derive(Debug, thiserror::Error)]
#[error("explanations reference unknown documents: {}", .0.join(", "))]
pub struct OrphanExplanations(pub Vec<String>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub documents: usize,
    pub failures: usize,
}

/// One horizontal bar, measured from the centre line.
#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub word: String,
    pub weight: f64,
    pub x: f64,
    pub width: f64,
    pub positive: bool,
}

/// Widths proportional to |weight|, scaled so the largest is `BAR_MAX_WIDTH`.
pub fn explanation_bars(e: &Explanation) -> Vec<Bar> {
    let max = e.word_weights.iter().map(|(_, w)| w.abs()).fold(0.0, f64::max);
    e.word_weights
        .iter()
        .map(|(word, weight)| {
            let width = if max > 0.0 { weight.abs() / max * BAR_MAX_WIDTH } else { 0.0 };
            let positive = *weight >= 0.0;
            Bar {
                word: word.clone(),
                weight: *weight,
                x: if positive { BAR_CENTER } else { BAR_CENTER - width },
                width,
                positive,
            }
        })
        .collect()
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn f3(v: f64) -> String {
    format!("{v:.3}")
}

fn sd(v: Option<f64>) -> String {
    v.map_or_else(|| "&ndash;".to_string(), f3)
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em;color:#222}\
table{border-collapse:collapse;margin:1em 0}\
th,td{border:1px solid #bbb;padding:3px 8px;text-align:right}\
th:first-child,td:first-child{text-align:left}\
h2{border-bottom:1px solid #ccc;margin-top:2em}\
.doc{margin:1.5em 0}.muted{color:#666}";

pub fn render(
    summary: &ReportSummary,
    records: &[PredictionRecord],
    explanations: &[Explanation],
    analytics: &Analytics,
) -> Result<String, OrphanExplanations> {
    let ids: BTreeSet<&str> = records.iter().map(|r| r.doc_id.as_str()).collect();
    let orphans: Vec<String> = explanations
        .iter()
        .filter(|e| !ids.contains(e.doc_id.as_str()))
        .map(|e| e.doc_id.clone())
        .collect();
    if !orphans.is_empty() {
        return Err(OrphanExplanations(orphans));
    }

    let mut h = String::new();
    h.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    h.push_str("<title>Humour style analysis</title>\n");
    let _ = writeln!(h, "<style>{STYLE}</style>\n</head>\n<body>");
    h.push_str("<h1>Humour style analysis</h1>\n");
    corpus_section(&mut h, summary, records);
    complexity_section(&mut h, analytics);
    emotion_section(&mut h, analytics);
    affect_section(&mut h, analytics);
    error_section(&mut h, analytics);
    for m in [&analytics.pearson, &analytics.spearman].into_iter().flatten() {
        heatmap(&mut h, m);
    }
    if !explanations.is_empty() {
        h.push_str("<h2>Explanations</h2>\n");
        for e in explanations {
            explanation_block(&mut h, e);
        }
    }
    h.push_str("</body>\n</html>\n");
    Ok(h)
}

fn corpus_section(h: &mut String, summary: &ReportSummary, records: &[PredictionRecord]) {
    h.push_str("<h2>Corpus</h2>\n<table>\n<tr><th>Style</th><th>Gold</th><th>Predicted</th></tr>\n");
    for s in HumourStyle::ALL {
        let gold = records.iter().filter(|r| r.gold_label == Some(s)).count();
        let pred = records.iter().filter(|r| r.predicted_label == s).count();
        let _ = writeln!(h, "<tr><td>{}</td><td>{gold}</td><td>{pred}</td></tr>", s.display_name());
    }
    h.push_str("</table>\n");
    let _ = writeln!(
        h,
        "<p>{} documents, {} classified, {} per-document failures.</p>",
        summary.documents,
        records.len(),
        summary.failures
    );
}

fn complexity_section(h: &mut String, a: &Analytics) {
    h.push_str("<h2>Complexity statistics</h2>\n<table>\n<tr><th></th>");
    for (_, title) in COMPLEXITY_FEATURES {
        let _ = write!(h, "<th colspan=\"4\">{title}</th>");
    }
    let _ = write!(h, "</tr>\n<tr><th>{}</th>", group_title(a.stats.group_by));
    for _ in COMPLEXITY_FEATURES {
        h.push_str("<th>Mean</th><th>Std</th><th>Min</th><th>Max</th>");
    }
    h.push_str("</tr>\n");
    for g in &a.stats.styles {
        let _ = write!(h, "<tr><td>{}</td>", g.style.display_name());
        for (f, _) in COMPLEXITY_FEATURES {
            let d = &g.features[&f];
            let _ = write!(h, "<td>{}</td><td>{}</td><td>{}</td><td>{}</td>", f3(d.mean), sd(d.sd), f3(d.min), f3(d.max));
        }
        h.push_str("</tr>\n");
    }
    h.push_str("</table>\n");
}

fn emotion_section(h: &mut String, a: &Analytics) {
    let emotions = emotion_columns();
    h.push_str("<h2>Emotion distribution</h2>\n<table>\n<tr><th>Style</th>");
    for e in &emotions {
        let _ = write!(h, "<th>{}</th>", e.display_name());
    }
    h.push_str("</tr>\n");
    for g in &a.stats.styles {
        let _ = write!(h, "<tr><td>{}</td>", g.style.display_name());
        for e in &emotions {
            let _ = write!(h, "<td>{}</td>", g.emotion_counts[e]);
        }
        h.push_str("</tr>\n");
    }
    h.push_str("</table>\n");
}

fn affect_section(h: &mut String, a: &Analytics) {
    h.push_str("<h2>Confidence and affect</h2>\n<table>\n");
    h.push_str("<tr><th>Style</th><th>N</th><th>Confidence</th><th>Polarity</th><th>Subjectivity</th><th>Sarcasm (%)</th></tr>\n");
    for g in &a.stats.styles {
        let _ = writeln!(
            h,
            "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{:.1}</td></tr>",
            g.style.display_name(),
            g.n,
            f3(g.mean_confidence),
            f3(g.features[&NumericFeature::Polarity].mean),
            f3(g.features[&NumericFeature::Subjectivity].mean),
            g.sarcasm_percent
        );
    }
    h.push_str("</table>\n");
    if let Some(k) = a.kruskal_wallis.get("confidence").and_then(|t| t.result.as_ref()) {
        let _ = writeln!(
            h,
            "<p class=\"muted\">Confidence by style: Kruskal-Wallis H = {}, df = {}, p = {:.4}</p>",
            f3(k.statistic),
            k.df,
            k.p_value
        );
    }
}

fn error_section(h: &mut String, a: &Analytics) {
    h.push_str("<h2>Misclassification types</h2>\n");
    if a.taxonomy.groups.is_empty() {
        h.push_str("<p>No misclassified documents with gold labels.</p>\n");
        return;
    }
    h.push_str("<table>\n<tr><th>Error type</th><th>N</th><th>Confidence mean</th><th>SD</th>");
    h.push_str("<th>Semantic conflicts mean</th><th>SD</th><th>Polarity</th><th>Subj.</th></tr>\n");
    for g in &a.taxonomy.groups {
        let _ = writeln!(
            h,
            "<tr><td>{} &rarr; {}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
            g.true_label.display_name(),
            g.predicted_label.display_name(),
            g.n,
            f3(g.confidence_mean),
            sd(g.confidence_sd),
            f3(g.semantic_conflict_mean),
            sd(g.semantic_conflict_sd),
            f3(g.polarity_mean),
            f3(g.subjectivity_mean)
        );
    }
    h.push_str("</table>\n");
    if let Some(c) = &a.error_polarity.test.result {
        let _ = writeln!(
            h,
            "<p class=\"muted\">Error type &times; polarity sign: &chi;&sup2; = {}, df = {}, p = {:.4}{}</p>",
            f3(c.statistic),
            c.df,
            c.p_value,
            if c.low_expected_warning { " (some expected counts below 5)" } else { "" }
        );
    }
}

/// Blue for positive, red for negative, grey for undefined.
fn heat_colour(v: Option<f64>) -> String {
    match v {
        None => "#dddddd".to_string(),
        Some(r) => {
            let t = r.abs().min(1.0);
            let fade = (255.0 - 155.0 * t).round() as u8;
            if r >= 0.0 {
                format!("rgb({fade},{fade},255)")
            } else {
                format!("rgb(255,{fade},{fade})")
            }
        }
    }
}

fn heatmap(h: &mut String, m: &CorrelationMatrix) {
    const CELL: usize = 44;
    const LABEL: usize = 120;
    let k = m.features.len();
    let size = LABEL + CELL * k;
    let _ = writeln!(h, "<h2>{} correlations</h2>", if m.method.as_str() == "pearson" { "Pearson" } else { "Spearman" });
    let _ = writeln!(
        h,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" font-size=\"10\">"
    );
    for (j, name) in m.features.iter().enumerate() {
        let x = LABEL + CELL * j + CELL / 2;
        let _ = writeln!(
            h,
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"start\" transform=\"rotate(-45 {x} {})\">{}</text>",
            LABEL - 6,
            LABEL - 6,
            esc(name)
        );
    }
    for (i, name) in m.features.iter().enumerate() {
        let y = LABEL + CELL * i;
        let _ = writeln!(h, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>", LABEL - 4, y + CELL / 2 + 3, esc(name));
        for (j, v) in m.values[i].iter().enumerate() {
            let x = LABEL + CELL * j;
            let label = v.map_or_else(|| "n/a".to_string(), |r| format!("{r:.2}"));
            let _ = writeln!(
                h,
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\" stroke=\"#fff\"/><text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{label}</text>",
                heat_colour(*v),
                x + CELL / 2,
                y + CELL / 2 + 3
            );
        }
    }
    h.push_str("</svg>\n");
}

fn explanation_block(h: &mut String, e: &Explanation) {
    let bars = explanation_bars(e);
    let height = 10.0 + BAR_HEIGHT * bars.len() as f64;
    let _ = writeln!(
        h,
        "<div class=\"doc\" id=\"doc-{}\">\n<h3>{}</h3>\n<p>target {}, predicted {} ({}), local fit r&sup2; = {}</p>",
        esc(&e.doc_id),
        esc(&e.doc_id),
        e.target_class.display_name(),
        e.predicted_class.display_name(),
        f3(e.confidence),
        f3(e.local_fidelity_r2)
    );
    let _ = writeln!(
        h,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"{height}\" font-size=\"12\">"
    );
    let _ = writeln!(
        h,
        "<line x1=\"{BAR_CENTER}\" y1=\"0\" x2=\"{BAR_CENTER}\" y2=\"{height}\" stroke=\"#888\"/>"
    );
    for (i, b) in bars.iter().enumerate() {
        let y = 5.0 + BAR_HEIGHT * i as f64;
        let _ = writeln!(
            h,
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{}</text><rect class=\"bar\" x=\"{:.2}\" y=\"{:.1}\" width=\"{:.2}\" height=\"{:.1}\" fill=\"{}\" data-weight=\"{}\"/><text x=\"{}\" y=\"{:.1}\">{:+.3}</text>",
            BAR_CENTER - BAR_MAX_WIDTH - 8.0,
            y + 12.0,
            esc(&b.word),
            b.x,
            y + 2.0,
            b.width,
            BAR_HEIGHT - 4.0,
            if b.positive { POSITIVE } else { NEGATIVE },
            b.weight,
            BAR_CENTER + BAR_MAX_WIDTH + 8.0,
            y + 12.0,
            b.weight
        );
    }
    h.push_str("</svg>\n</div>\n");
}
