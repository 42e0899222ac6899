//! Sweeps the semantic-conflict threshold over the two anchor jokes and
//! prints conflict counts per threshold and similarity mode.
//!
//! Usage: cargo run -p risus-core --example calibrate_conflict [resource-dir]

use std::path::PathBuf;

use risus_core::config::ConflictSimilarity;
use risus_core::contrast::semantic_conflicts;
use risus_core::lexicon::{Lexicons, ResourcePaths};
use risus_core::Document;

const ANCHORS: [(&str, &str, usize); 2] = [
    (
        "winnie",
        "Reminder that Winnie the Pooh wore a crop top with no pants and ate his fave food and loved himself. So you can too.",
        5,
    ),
    (
        "manager",
        "My manager asked if I take constructive criticism and I said yes while wiping away my teary eyes.",
        25,
    ),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../resources"));
    let (lex, _) = Lexicons::load(&ResourcePaths::under(&root))?;
    let docs: Vec<Document> = ANCHORS.iter().map(|(id, text, _)| Document::new(*id, *text)).collect();

    for mode in [ConflictSimilarity::Rooted, ConflictSimilarity::SamePos] {
        println!("mode {mode:?}");
        println!("  theta   {}", ANCHORS.map(|a| format!("{:>8}", format!("{}({})", a.0, a.2))).join(""));
        let mut best: Option<(f64, usize)> = None;
        for step in 1..=30 {
            let theta = f64::from(step) * 0.01;
            let counts: Vec<usize> = docs
                .iter()
                .map(|d| semantic_conflicts(d, &lex.wordnet, &lex.wordlists.stopwords, theta, mode).len())
                .collect();
            let err: usize = counts.iter().zip(ANCHORS).map(|(c, a)| c.abs_diff(a.2)).sum();
            if best.is_none_or(|(_, e)| err < e) {
                best = Some((theta, err));
            }
            println!("  {theta:.2}  {}", counts.iter().map(|c| format!("{c:>8}")).collect::<String>());
        }
        if let Some((theta, err)) = best {
            println!("  best theta {theta:.2} (total abs error {err})");
        }
    }
    Ok(())
}
