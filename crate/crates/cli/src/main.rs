//! Command-line front end: binds config files, resources, and the training,
//! disambiguation, and evaluation operations into reproducible runs.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for data
//! errors. Diagnostics, the resolved configuration, and input digests go to
//! stderr; reports and statistics go to stdout.

mod commands;
mod settings;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use senseforge_core::Error;

#[derive(Parser)]
#[command(
    name = "senseforge",
    version,
    about = "Supervised word sense disambiguation: train, disambiguate, evaluate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Config file of `key = value` lines; `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one config key, e.g. --set layer1.base=IMSWE. Repeatable.
    #[arg(long, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    common: Common,
    /// Sense inventory: a compact lexicon file or a dictionary directory.
    #[arg(long, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Sense-annotated training corpus.
    #[arg(long, value_name = "XML")]
    corpus: Option<PathBuf>,
    /// Gold keys for the training corpus.
    #[arg(long, value_name = "KEYS")]
    keys: Option<PathBuf>,
    /// Where to write the model archive.
    #[arg(long, short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DisambiguateArgs {
    #[command(flatten)]
    common: Common,
    /// Sense inventory: a compact lexicon file or a dictionary directory.
    #[arg(long, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Trained model archive.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Corpus to disambiguate.
    #[arg(long, value_name = "XML")]
    corpus: Option<PathBuf>,
    /// Where to write the answer key file.
    #[arg(long, short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
    /// Re-disambiguate with updated hypotheses up to this many passes;
    /// 0 runs the model's layers once.
    #[arg(long, value_name = "N")]
    passes: Option<u64>,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    common: Common,
    /// System answers in key-file format.
    #[arg(long, value_name = "KEYS")]
    answers: Option<PathBuf>,
    /// Gold keys to score against.
    #[arg(long, value_name = "KEYS")]
    gold: Option<PathBuf>,
    /// Scored corpus; enables the per-part-of-speech breakdown.
    #[arg(long, value_name = "XML")]
    corpus: Option<PathBuf>,
    /// Sense inventory; enables the non-first-sense rate.
    #[arg(long, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Count the non-first-sense rate over all instances instead of over
    /// correct answers.
    #[arg(long)]
    all_instances: bool,
    /// Also write the report to this file.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AblateArgs {
    #[command(flatten)]
    common: Common,
    /// Sense inventory: a compact lexicon file or a dictionary directory.
    #[arg(long, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Sense-annotated training corpus.
    #[arg(long, value_name = "XML")]
    corpus: Option<PathBuf>,
    /// Gold keys for the training corpus.
    #[arg(long, value_name = "KEYS")]
    keys: Option<PathBuf>,
    /// Benchmark as name=corpus,keys. Repeatable.
    #[arg(long, value_name = "NAME=XML,KEYS")]
    benchmark: Vec<String>,
    /// Comma-separated base systems to ablate, e.g. IMS,IMSWE.
    #[arg(long, value_name = "LIST")]
    bases: Option<String>,
    /// Also write the grid as TSV to this file.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AugmentArgs {
    #[command(flatten)]
    common: Common,
    /// Sense inventory: a compact lexicon file or a dictionary directory.
    #[arg(long, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Base corpus to merge extra sources into.
    #[arg(long, value_name = "XML")]
    corpus: Option<PathBuf>,
    /// Gold keys for the base corpus.
    #[arg(long, value_name = "KEYS")]
    keys: Option<PathBuf>,
    /// Harvest the lexicon's example sentences.
    #[arg(long)]
    examples: bool,
    /// Extra annotated corpus as corpus,keys. Repeatable.
    #[arg(long, value_name = "XML,KEYS")]
    gloss: Vec<String>,
    /// Where to write the merged corpus.
    #[arg(long, value_name = "XML")]
    output_corpus: Option<PathBuf>,
    /// Where to write the merged gold keys.
    #[arg(long, value_name = "KEYS")]
    output_keys: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    common: Common,
    /// Sense inventory: a compact lexicon file or a dictionary directory.
    #[arg(long, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Corpus to describe.
    #[arg(long, value_name = "XML")]
    corpus: Option<PathBuf>,
    /// Key file to describe.
    #[arg(long, value_name = "KEYS")]
    keys: Option<PathBuf>,
    /// Model archive to describe.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model and write it as an archive.
    Train(TrainArgs),
    /// Disambiguate a corpus with a trained model and write answers.
    Disambiguate(DisambiguateArgs),
    /// Score an answer file against gold keys.
    Score(ScoreArgs),
    /// Train and score the full grid of base systems and semantic variants.
    Ablate(AblateArgs),
    /// Write harvested or merged training corpora.
    Augment(AugmentArgs),
    /// Print statistics about a lexicon, corpus, key file, or model.
    Inspect(InspectArgs),
}

fn push_path(overrides: &mut Vec<String>, key: &str, value: &Option<PathBuf>) {
    if let Some(path) = value {
        overrides.push(format!("{}={}", key, path.display()));
    }
}

fn push_value(overrides: &mut Vec<String>, key: &str, value: &Option<impl std::fmt::Display>) {
    if let Some(value) = value {
        overrides.push(format!("{}={}", key, value));
    }
}

fn run(cli: Cli) -> senseforge_core::Result<()> {
    match cli.command {
        Command::Train(args) => {
            let mut overrides = args.common.set.clone();
            push_path(&mut overrides, "lexicon", &args.lexicon);
            push_path(&mut overrides, "train.corpus", &args.corpus);
            push_path(&mut overrides, "train.keys", &args.keys);
            push_path(&mut overrides, "output", &args.output);
            commands::train(args.common.config.as_deref(), &overrides)
        }
        Command::Disambiguate(args) => {
            let mut overrides = args.common.set.clone();
            push_path(&mut overrides, "lexicon", &args.lexicon);
            push_path(&mut overrides, "model", &args.model);
            push_path(&mut overrides, "eval.corpus", &args.corpus);
            push_path(&mut overrides, "output", &args.output);
            push_value(&mut overrides, "iterate", &args.passes);
            commands::disambiguate(args.common.config.as_deref(), &overrides)
        }
        Command::Score(args) => {
            let mut overrides = args.common.set.clone();
            push_path(&mut overrides, "answers", &args.answers);
            push_path(&mut overrides, "eval.keys", &args.gold);
            push_path(&mut overrides, "eval.corpus", &args.corpus);
            push_path(&mut overrides, "lexicon", &args.lexicon);
            push_path(&mut overrides, "report", &args.report);
            if args.all_instances {
                overrides.push("score.denominator=all".to_string());
            }
            commands::score(args.common.config.as_deref(), &overrides)
        }
        Command::Ablate(args) => {
            let mut overrides = args.common.set.clone();
            push_path(&mut overrides, "lexicon", &args.lexicon);
            push_path(&mut overrides, "train.corpus", &args.corpus);
            push_path(&mut overrides, "train.keys", &args.keys);
            if !args.benchmark.is_empty() {
                overrides.push(format!("benchmarks={}", args.benchmark.join(";")));
            }
            push_value(&mut overrides, "ablate.bases", &args.bases);
            push_path(&mut overrides, "report", &args.report);
            commands::ablate(args.common.config.as_deref(), &overrides)
        }
        Command::Augment(args) => {
            let mut overrides = args.common.set.clone();
            push_path(&mut overrides, "lexicon", &args.lexicon);
            push_path(&mut overrides, "train.corpus", &args.corpus);
            push_path(&mut overrides, "train.keys", &args.keys);
            if args.examples {
                overrides.push("augment.examples=true".to_string());
            }
            if !args.gloss.is_empty() {
                overrides.push(format!("augment.gloss_corpora={}", args.gloss.join(";")));
            }
            push_path(&mut overrides, "output.corpus", &args.output_corpus);
            push_path(&mut overrides, "output.keys", &args.output_keys);
            commands::augment(args.common.config.as_deref(), &overrides)
        }
        Command::Inspect(args) => {
            let mut overrides = args.common.set.clone();
            push_path(&mut overrides, "lexicon", &args.lexicon);
            push_path(&mut overrides, "eval.corpus", &args.corpus);
            push_path(&mut overrides, "eval.keys", &args.keys);
            push_path(&mut overrides, "model", &args.model);
            commands::inspect(args.common.config.as_deref(), &overrides)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        let code = match e {
            Error::Usage(_) => 1,
            _ => 2,
        };
        std::process::exit(code);
    }
}
