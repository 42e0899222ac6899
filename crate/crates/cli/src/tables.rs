//! CSV renderings of the corpus tables. Missing values (a standard
//! deviation over one record, a correlation with a constant feature) are
//! empty fields.

use risus_core::affective::Emotion;
use risus_core::analytics::{ConfusionMatrix, CorrelationMatrix, Descriptive, ErrorTaxonomy, GroupBy, StyleStats};
use risus_core::features::NumericFeature;
use risus_core::HumourStyle;

/// The four mechanisms of the complexity table, with their column titles.
pub const COMPLEXITY_FEATURES: [(NumericFeature, &str); 4] = [
    (NumericFeature::SyllableComplexity, "Syllable Complexity"),
    (NumericFeature::SemanticConflict, "Semantic Conflict Count"),
    (NumericFeature::Homonym, "Homonym Count"),
    (NumericFeature::Exaggeration, "Exaggeration Count"),
];

/// Emotion columns in alphabetical order.
pub fn emotion_columns() -> Vec<Emotion> {
    let mut e = Emotion::ALL.to_vec();
    e.sort_by_key(|e| e.display_name());
    e
}

pub fn group_title(group_by: GroupBy) -> &'static str {
    match group_by {
        GroupBy::Predicted => "Predicted Class",
        GroupBy::Gold => "Gold Class",
    }
}

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn finish(rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn complexity_table(stats: &StyleStats) -> Vec<u8> {
    let mut header = vec![group_title(stats.group_by).to_string()];
    for (_, title) in COMPLEXITY_FEATURES {
        for stat in ["Mean", "Std", "Min", "Max"] {
            header.push(format!("{title} {stat}"));
        }
    }
    let mut rows = vec![header];
    for g in &stats.styles {
        let mut row = vec![g.style.display_name().to_string()];
        for (f, _) in COMPLEXITY_FEATURES {
            let d: &Descriptive = &g.features[&f];
            row.extend([num(d.mean), opt(d.sd), num(d.min), num(d.max)]);
        }
        rows.push(row);
    }
    finish(rows)
}

pub fn emotion_table(stats: &StyleStats) -> Vec<u8> {
    let emotions = emotion_columns();
    let mut header = vec!["Style".to_string()];
    header.extend(emotions.iter().map(|e| e.display_name().to_string()));
    let mut rows = vec![header];
    for g in &stats.styles {
        let mut row = vec![g.style.display_name().to_string()];
        row.extend(emotions.iter().map(|e| g.emotion_counts[e].to_string()));
        rows.push(row);
    }
    finish(rows)
}

pub fn affect_table(stats: &StyleStats) -> Vec<u8> {
    let mut rows = vec![["Style", "N", "Confidence", "Polarity", "Subjectivity", "Sarcasm (%)"]
        .map(String::from)
        .to_vec()];
    for g in &stats.styles {
        rows.push(vec![
            g.style.display_name().to_string(),
            g.n.to_string(),
            num(g.mean_confidence),
            num(g.features[&NumericFeature::Polarity].mean),
            num(g.features[&NumericFeature::Subjectivity].mean),
            num(g.sarcasm_percent),
        ]);
    }
    finish(rows)
}

pub fn error_table(t: &ErrorTaxonomy) -> Vec<u8> {
    let mut rows = vec![[
        "True Class",
        "Predicted Class",
        "N",
        "Confidence Mean",
        "Confidence SD",
        "Semantic Conflicts Mean",
        "Semantic Conflicts SD",
        "Polarity",
        "Subj.",
    ]
    .map(String::from)
    .to_vec()];
    for g in &t.groups {
        rows.push(vec![
            g.true_label.display_name().to_string(),
            g.predicted_label.display_name().to_string(),
            g.n.to_string(),
            num(g.confidence_mean),
            opt(g.confidence_sd),
            num(g.semantic_conflict_mean),
            opt(g.semantic_conflict_sd),
            num(g.polarity_mean),
            num(g.subjectivity_mean),
        ]);
    }
    finish(rows)
}

pub fn confusion_table(m: &ConfusionMatrix) -> Vec<u8> {
    let mut header = vec!["gold \\ predicted".to_string()];
    header.extend(HumourStyle::ALL.iter().map(|s| s.as_str().to_string()));
    let mut rows = vec![header];
    for gold in HumourStyle::ALL {
        let mut row = vec![gold.as_str().to_string()];
        row.extend(HumourStyle::ALL.iter().map(|&p| m.get(gold, p).to_string()));
        rows.push(row);
    }
    finish(rows)
}

/// Every feature's descriptives per style, one row per (style, feature).
pub fn descriptives_table(stats: &StyleStats) -> Vec<u8> {
    let mut rows = vec![["style", "feature", "n", "mean", "sd", "min", "max"].map(String::from).to_vec()];
    for g in &stats.styles {
        for (f, d) in &g.features {
            rows.push(vec![
                g.style.as_str().to_string(),
                f.as_str().to_string(),
                d.n.to_string(),
                num(d.mean),
                opt(d.sd),
                num(d.min),
                num(d.max),
            ]);
        }
    }
    finish(rows)
}

pub fn correlation_table(m: &CorrelationMatrix) -> Vec<u8> {
    let mut header = vec!["feature".to_string()];
    header.extend(m.features.iter().cloned());
    let mut rows = vec![header];
    for (name, values) in m.features.iter().zip(&m.values) {
        let mut row = vec![name.clone()];
        row.extend(values.iter().map(|v| opt(*v)));
        rows.push(row);
    }
    finish(rows)
}
