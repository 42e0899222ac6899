use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use risus::config::RunConfig;
use risus::corpus::CorpusFormat;
use risus::{Command, Outcome, RunError, RunOptions};

#[derive(Parser)]
#[command(name = "risus", version, about = "Humour-style analysis pipeline")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set explainer.n=2000`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Output directory (same as `--set output_dir=...`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    /// Stop at the first per-document error.
    #[arg(long, global = true)]
    fail_fast: bool,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus file (.csv or .jsonl).
    #[arg(long)]
    corpus: PathBuf,
    /// Corpus format when the extension does not say.
    #[arg(long)]
    format: Option<CorpusFormat>,
}

#[derive(Subcommand)]
enum Sub {
    /// Validate a corpus and print its summary.
    Ingest(CorpusArgs),
    /// Extract per-document features.
    Features(CorpusArgs),
    /// Train the baseline classifier on a labelled corpus.
    Train {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Also copy the trained model here.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Explain classifier predictions.
    Explain {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Comma-separated document ids (default: all).
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
    },
    /// Features, predictions, tables and statistics.
    Analyze(CorpusArgs),
    /// Render the HTML report from an existing output directory.
    Report,
    /// Every stage, including explanations and the report.
    All {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, RunError> {
    let mut overrides = cli.overrides.clone();
    if let Some(out) = &cli.out {
        overrides.push(format!("output_dir={:?}", out.display().to_string()));
    }
    let mut cfg = RunConfig::load(cli.config.as_deref(), &overrides)?;
    cfg.apply_env();
    Ok(cfg)
}

fn report_outcome(o: &Outcome) {
    for f in &o.failures {
        eprintln!("failed: {} [{}]: {}", f.doc_id, f.stage, f.message);
    }
    eprintln!(
        "{} documents, {} failure(s), {} artifact(s)",
        o.documents,
        o.failures.len(),
        o.artifacts.len()
    );
    println!("manifest sha256 {}", o.manifest_sha256);
}

fn execute(cli: Cli) -> Result<i32, RunError> {
    let mut cfg = load_config(&cli)?;
    let options = RunOptions {
        jobs: cli.jobs,
        fail_fast: cli.fail_fast,
    };
    let (command, corpus_args) = match &cli.command {
        Sub::Ingest(c) => {
            let corpus = risus::load_corpus(&c.corpus, c.format)?;
            let summary = serde_json::to_string_pretty(&corpus.summary()).expect("summary serializes");
            println!("{summary}");
            return Ok(0);
        }
        Sub::Report => {
            cfg.validate()?;
            let outcome = risus::report_from_dir(&cfg)?;
            report_outcome(&outcome);
            return Ok(outcome.exit_code());
        }
        Sub::Features(c) => (Command::Features, c),
        Sub::Train { corpus, .. } => (Command::Train, corpus),
        Sub::Explain { corpus, ids } | Sub::All { corpus, ids } => {
            if !ids.is_empty() {
                cfg.explainer.ids = ids.clone();
            }
            let command = if matches!(cli.command, Sub::All { .. }) { Command::All } else { Command::Explain };
            (command, corpus)
        }
        Sub::Analyze(c) => (Command::Analyze, c),
    };
    let outcome = risus::run(command, &corpus_args.corpus, corpus_args.format, &cfg, options)?;
    if let Sub::Train { model_out: Some(dest), .. } = &cli.command {
        let src = cfg.output_dir.join("model.json");
        std::fs::copy(&src, dest).map_err(|e| RunError::Runtime(format!("{}: {e}", dest.display())))?;
    }
    report_outcome(&outcome);
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
