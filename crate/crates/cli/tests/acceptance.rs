//! Acceptance gate: one PASS/FAIL/SKIP line per criterion. Exits non-zero
//! if any criterion fails.

#[path = "../../core/tests/support/linear_oracle.rs"]
mod linear_oracle;
#[path = "../../core/tests/support/ridge_oracle.rs"]
mod ridge_oracle;
#[path = "../../core/tests/support/stats_oracle.rs"]
mod stats_oracle;
#[path = "../../core/tests/support/toy_lexicon.rs"]
mod toy_lexicon;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use risus::config::RunConfig;
use risus::{Command, RunOptions};
use risus_core::analytics::{chi_square_association, kruskal_wallis, pearson, spearman};
use risus_core::config::ConflictSimilarity;
use risus_core::contrast::{semantic_conflicts, ContrastFeatures};
use risus_core::lexicon::{Lexicons, ResourcePaths};
use risus_core::lime::{explain, fit_local_surrogate, word_features, ExplainParams};
use risus_core::linguistic::{detect_puns, homophones, rhyme_pairs, LinguisticFeatures};
use risus_core::tagger::Tagger;
use risus_core::{AnalysisConfig, Document, HumourStyle};

type Verdict = Result<String, String>;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn lexicons() -> Lexicons {
    Lexicons::load(&ResourcePaths::under(root().join("resources"))).expect("shipped resources").0
}

const MOTHER: &str = "This is your mother. I just texted you but I don't know how to make the facey-things so... happy face at the end.";
const MANAGER: &str = "My manager asked if I take constructive criticism and I said yes while wiping away my teary eyes.";
const DNA: &str = "What did one DNA say to the other DNA? these genes make me look fat";
const WINNIE: &str = "Reminder that Winnie the Pooh wore a crop top with no pants and ate his fave food and loved himself. So you can too.";

fn lime_linear_recovery() -> Verdict {
    let start = Instant::now();
    let model = linear_oracle::model(0.1);
    let params = |seed, k, target| ExplainParams {
        target: Some(target),
        k,
        n: 2000,
        seed,
        lambda: 1.0,
        kernel_width: None,
    };
    let mut worst = f64::INFINITY;
    let mut unstable = Vec::new();
    for (doc, target) in linear_oracle::documents(25, 11) {
        let e = explain(&doc, &model, &params(1, usize::MAX, target)).map_err(|e| e.to_string())?;
        let features = word_features(&doc);
        let surrogate: Vec<f64> = features
            .iter()
            .map(|w| e.word_weights.iter().find(|(x, _)| x == w).map_or(0.0, |p| p.1))
            .collect();
        let truth: Vec<f64> = features.iter().map(|w| model.coefficient(target, w)).collect();
        worst = worst.min(linear_oracle::spearman(&surrogate, &truth));
        let top = |seed| -> Result<BTreeSet<String>, String> {
            let e = explain(&doc, &model, &params(seed, 3, target)).map_err(|e| e.to_string())?;
            Ok(e.word_weights.into_iter().map(|(w, _)| w).collect())
        };
        if top(1)? != top(2)? {
            unstable.push(doc.id.clone());
        }
    }
    let took = start.elapsed();
    check(
        worst >= 0.99 && unstable.is_empty() && took < Duration::from_secs(30),
        format!("min rank corr {worst:.4}, top-3 unstable on {unstable:?}, {:.1}s", took.as_secs_f64()),
    )
}

fn ridge_and_gradient() -> Verdict {
    let mut ridge_gap: f64 = 0.0;
    for (seed, lambda) in [(1, 1.0), (2, 0.01), (3, 10.0), (4, 0.5), (5, 2.0)] {
        let (masks, y, w) = ridge_oracle::random_design(8, 60, seed);
        let fit = fit_local_surrogate(&masks, &y, &w, lambda).map_err(|e| e.to_string())?;
        let oracle = ridge_oracle::normal_equations(&masks, &y, &w, lambda);
        for (a, b) in fit.weights.iter().chain([&fit.intercept]).zip(&oracle) {
            ridge_gap = ridge_gap.max((a - b).abs());
        }
    }
    let grad_gap = (0..5)
        .map(|seed| {
            let (obj, params) = ridge_oracle::random_objective(seed);
            ridge_oracle::gradient_gap(&obj, &params, 1e-5)
        })
        .fold(0.0, f64::max);
    check(
        ridge_gap < 1e-6 && grad_gap < 1e-5,
        format!("ridge max abs gap {ridge_gap:.1e}, gradient max rel gap {grad_gap:.1e}"),
    )
}

fn correlation_engine() -> Verdict {
    let textbook: [(&[i64], &[i64]); 5] = [
        (&[1, 2, 3, 4, 5], &[2, 4, 5, 4, 5]),
        (&[43, 21, 25, 42, 57, 59], &[99, 65, 79, 75, 87, 81]),
        (&[1, 2, 3, 4, 5, 6, 7], &[7, 6, 5, 4, 3, 2, 1]),
        (&[10, 8, 13, 9, 11, 14, 6, 4, 12, 7, 5], &[804, 695, 758, 881, 833, 996, 724, 426, 1084, 482, 568]),
        (&[3, 1, 4, 1, 5, 9, 2, 6], &[2, 7, 1, 8, 2, 8, 1, 8]),
    ];
    let floats = |v: &[i64]| -> Vec<f64> { v.iter().map(|&x| x as f64).collect() };
    let mut gap: f64 = 0.0;
    for (x, y) in textbook {
        let (fx, fy) = (floats(x), floats(y));
        let p = pearson(&fx, &fy).ok_or("constant textbook vector")?;
        gap = gap.max((p - stats_oracle::integer_pearson(x, y)).abs());
        let (rx, ry) = (stats_oracle::counting_ranks(&fx), stats_oracle::counting_ranks(&fy));
        let tied = rx.iter().chain(&ry).any(|r| r.fract() != 0.0);
        let want = if tied {
            stats_oracle::integer_pearson(
                &rx.iter().map(|r| (r * 2.0) as i64).collect::<Vec<_>>(),
                &ry.iter().map(|r| (r * 2.0) as i64).collect::<Vec<_>>(),
            )
        } else {
            stats_oracle::untied_spearman(&fx, &fy)
        };
        gap = gap.max((spearman(&fx, &fy).unwrap() - want).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut invariance: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(5..40);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let exp: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let cube: Vec<f64> = y.iter().map(|v| v.powi(3)).collect();
        invariance = invariance.max((spearman(&exp, &cube).unwrap() - spearman(&x, &y).unwrap()).abs());
    }
    let (x, y) = stats_oracle::outlier_construction(5);
    let (p, s) = (pearson(&x, &y).unwrap(), spearman(&x, &y).unwrap());
    check(
        gap < 1e-12 && invariance < 1e-12 && p >= 0.9 && s <= 0.4,
        format!("textbook gap {gap:.1e}, invariance gap {invariance:.1e}, outliers pearson {p:.3} / spearman {s:.3}"),
    )
}

fn analyse(lex: &Lexicons, text: &str) -> (LinguisticFeatures, ContrastFeatures, Duration) {
    let start = Instant::now();
    let doc = Document::new("t", text);
    let tags = Tagger::new(&lex.wordnet).tag(&doc);
    let cfg = AnalysisConfig::default();
    let ling = LinguisticFeatures::extract(&doc, &tags, lex, &cfg).expect("analysis");
    let contrast = ContrastFeatures::extract(&doc, &tags, lex, &cfg);
    (ling, contrast, start.elapsed())
}

fn phonetic_fixtures(lex: &Lexicons) -> Verdict {
    let (mother, _, t1) = analyse(lex, MOTHER);
    let (manager, _, t2) = analyse(lex, MANAGER);
    let (dna, _, t3) = analyse(lex, DNA);
    let want: Vec<(String, String)> = [("do", "to"), ("do", "you"), ("know", "so"), ("to", "you")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let pun = dna.pun_candidates.iter().any(|p| p.word == "genes" && p.homophone == "jeans");
    let slowest = t1.max(t2).max(t3);
    check(
        mother.rhyme_pairs == want && manager.self_reference_count == 4 && pun && slowest < Duration::from_secs(1),
        format!(
            "rhymes {:?}, self references {}, genes/jeans {pun}, slowest {:.0} ms",
            mother.rhyme_pairs,
            manager.self_reference_count,
            slowest.as_secs_f64() * 1e3
        ),
    )
}

fn brute_force() -> Verdict {
    let toy = toy_lexicon::ToyLexicon::generate(17);
    let docs: Vec<Document> = toy
        .documents(50, 23)
        .into_iter()
        .enumerate()
        .map(|(i, t)| Document::new(format!("d{i}"), t))
        .collect();
    let mut mismatches = BTreeMap::new();
    let mut bump = |k: &'static str, bad: bool| *mismatches.entry(k).or_insert(0) += usize::from(bad);
    for d in &docs {
        bump("rhyme", rhyme_pairs(d, &toy.dict) != toy.oracle_rhymes(&d.raw_text));
        let map = homophones(d, &toy.dict, Some(&toy.wordnet));
        bump("homophone", map != toy.oracle_homophones(&d.raw_text));
        for threshold in [0.0, 0.2, 0.34] {
            let got: Vec<_> = detect_puns(&map, &toy.wordnet, threshold)
                .into_iter()
                .map(|p| (p.word, p.homophone, p.similarity))
                .collect();
            bump("pun", got != toy.oracle_puns(&d.raw_text, threshold));
        }
        for threshold in [0.125, 0.25, 0.34] {
            let got: Vec<_> = semantic_conflicts(d, &toy.wordnet, &toy.stopwords, threshold, ConflictSimilarity::Rooted)
                .into_iter()
                .map(|p| (p.first, p.second, p.similarity))
                .collect();
            bump("conflict", got != toy.oracle_conflicts(&d.raw_text, threshold));
        }
    }
    let total: usize = mismatches.values().sum();
    check(total == 0, format!("{} documents, mismatches {mismatches:?}", docs.len()))
}

fn conflict_calibration(lex: &Lexicons) -> Verdict {
    let (_, winnie, _) = analyse(lex, WINNIE);
    let (_, manager, _) = analyse(lex, MANAGER);
    let (w, m) = (winnie.semantic_conflict_count, manager.semantic_conflict_count);
    check(
        w.abs_diff(5) <= 2 && m.abs_diff(25) <= 5,
        format!("Winnie {w} (5 ± 2), manager {m} (25 ± 5)"),
    )
}

/// Published per-style means: syllable complexity, semantic conflicts, homonyms.
const REFERENCE_MEANS: [(HumourStyle, [f64; 3]); 5] = [
    (HumourStyle::Affiliative, [1.183, 29.755, 6.796]),
    (HumourStyle::Aggressive, [1.148, 13.439, 6.667]),
    (HumourStyle::Neutral, [1.355, 7.025, 2.662]),
    (HumourStyle::SelfDeprecating, [1.192, 18.717, 6.087]),
    (HumourStyle::SelfEnhancing, [1.206, 7.557, 4.902]),
];

fn corpus_ordering(lex: &Lexicons, dataset: &Path) -> Verdict {
    let start = Instant::now();
    let corpus = risus::load_corpus(dataset, None).map_err(|e| e.to_string())?;
    let mut sums: BTreeMap<HumourStyle, ([f64; 3], usize)> = BTreeMap::new();
    for doc in corpus.documents() {
        let Some(style) = doc.gold_label else { continue };
        let tags = Tagger::new(&lex.wordnet).tag(&doc);
        let cfg = AnalysisConfig::default();
        let Ok(ling) = LinguisticFeatures::extract(&doc, &tags, lex, &cfg) else { continue };
        let contrast = ContrastFeatures::extract(&doc, &tags, lex, &cfg);
        let e = sums.entry(style).or_insert(([0.0; 3], 0));
        e.0[0] += ling.syllable_complexity;
        e.0[1] += contrast.semantic_conflict_count as f64;
        e.0[2] += ling.homonym_count as f64;
        e.1 += 1;
    }
    if sums.len() < 5 {
        return Err(format!("dataset has labels for only {} styles", sums.len()));
    }
    let means: BTreeMap<HumourStyle, [f64; 3]> =
        sums.into_iter().map(|(s, (t, n))| (s, t.map(|v| v / n as f64))).collect();
    let argmax = |i: usize| *means.iter().max_by(|a, b| a.1[i].total_cmp(&b.1[i])).unwrap().0;
    let argmin = |i: usize| *means.iter().min_by(|a, b| a.1[i].total_cmp(&b.1[i])).unwrap().0;
    let orderings = argmax(0) == HumourStyle::Neutral
        && argmax(1) == HumourStyle::Affiliative
        && argmin(2) == HumourStyle::Neutral;
    let mut worst: f64 = 0.0;
    for (style, reference) in REFERENCE_MEANS {
        for (got, want) in means[&style].iter().zip(reference) {
            worst = worst.max((got - want).abs() / want);
        }
    }
    let took = start.elapsed();
    check(
        orderings && worst <= 0.15 && took < Duration::from_secs(300),
        format!(
            "orderings hold {orderings}, worst relative gap {:.1}%, {:.0}s",
            worst * 100.0,
            took.as_secs_f64()
        ),
    )
}

fn determinism() -> Verdict {
    let base = RunConfig::load(Some(&root().join("fixtures/run.toml")), &[]).map_err(|e| e.to_string())?;
    let corpus = root().join("fixtures/corpus.jsonl");
    let tmp = std::env::temp_dir().join(format!("risus-acceptance-{}", std::process::id()));
    let mut runs = Vec::new();
    for (i, jobs) in [1, 4].into_iter().enumerate() {
        let cfg = RunConfig {
            output_dir: tmp.join(format!("run{i}")),
            ..base.clone()
        };
        let outcome = risus::run(Command::All, &corpus, None, &cfg, RunOptions { jobs, fail_fast: true })
            .map_err(|e| e.to_string())?;
        let mut bytes = BTreeMap::new();
        for name in outcome.artifacts.keys().map(String::as_str).chain(["manifest.json"]) {
            bytes.insert(name.to_string(), std::fs::read(cfg.output_dir.join(name)).map_err(|e| e.to_string())?);
        }
        runs.push((outcome.manifest_sha256, bytes));
    }
    let _ = std::fs::remove_dir_all(&tmp);
    let (a, b) = (&runs[0], &runs[1]);
    let differing: Vec<&String> = a.1.keys().filter(|k| a.1.get(*k) != b.1.get(*k)).collect();
    check(
        a.0 == b.0 && a.1.len() == b.1.len() && differing.is_empty(),
        format!("{} files identical, manifest {}", a.1.len(), &a.0[..12]),
    )
}

fn statistics() -> Verdict {
    let mut gap: f64 = 0.0;
    let two = kruskal_wallis(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).map_err(|e| e.to_string())?;
    gap = gap.max((two.statistic - 27.0 / 7.0).abs());
    let three = kruskal_wallis(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).map_err(|e| e.to_string())?;
    gap = gap.max((three.statistic - 32.0 / 7.0).abs());
    gap = gap.max((three.p_value - stats_oracle::chi2_sf_df2(32.0 / 7.0)).abs());
    let tied = vec![
        vec![2.9, 3.0, 2.5, 2.6, 3.2],
        vec![3.8, 2.7, 4.0, 2.4],
        vec![2.8, 3.4, 3.7, 2.2, 2.0],
        vec![3.0, 2.5, 2.5, 4.0],
    ];
    gap = gap.max((kruskal_wallis(&tied).unwrap().statistic - stats_oracle::kruskal_h(&tied)).abs());
    let table = vec![vec![12, 5, 7], vec![3, 9, 14]];
    let chi = chi_square_association(&table).map_err(|e| e.to_string())?;
    let want = stats_oracle::chi_square(&table);
    gap = gap.max((chi.statistic - want).abs());
    gap = gap.max((chi.p_value - stats_oracle::chi2_sf_df2(want)).abs());

    let same_kw = kruskal_wallis(&[vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]).unwrap().p_value;
    let same_chi = chi_square_association(&[vec![6, 9, 3], vec![6, 9, 3]]).unwrap().p_value;
    check(
        gap < 1e-9 && (same_kw - 1.0).abs() < 1e-9 && (same_chi - 1.0).abs() < 1e-9,
        format!("max oracle gap {gap:.1e}, identical groups p = {same_kw:.6} (KW), {same_chi:.6} (chi-square)"),
    )
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Outcome::Fail(format!("panicked: {msg}"))
    });
    match outcome {
        Outcome::Pass(d) => {
            println!("PASS {name}: {d}");
            true
        }
        Outcome::Fail(d) => {
            println!("FAIL {name}: {d}");
            false
        }
        Outcome::Skip(d) => {
            println!("SKIP {name}: {d}");
            true
        }
    }
}

fn verdict(v: Verdict) -> Outcome {
    match v {
        Ok(d) => Outcome::Pass(d),
        Err(d) => Outcome::Fail(d),
    }
}

fn main() {
    std::env::set_current_dir(root()).expect("repository root");
    let lex = lexicons();
    let results = [
        run("lime-linear-recovery", || verdict(lime_linear_recovery())),
        run("ridge-gradient-checks", || verdict(ridge_and_gradient())),
        run("correlation-engine", || verdict(correlation_engine())),
        run("phonetic-fixtures", || verdict(phonetic_fixtures(&lex))),
        run("brute-force-equivalence", || verdict(brute_force())),
        run("semantic-conflict-calibration", || verdict(conflict_calibration(&lex))),
        run("corpus-ordering", || match std::env::var_os("RISUS_PAPER_DATASET") {
            Some(path) => verdict(corpus_ordering(&lex, Path::new(&path))),
            None => Outcome::Skip("set RISUS_PAPER_DATASET to the labelled dataset file".into()),
        }),
        run("determinism", || verdict(determinism())),
        run("statistics", || verdict(statistics())),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} criteria, {failed} failed", results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
