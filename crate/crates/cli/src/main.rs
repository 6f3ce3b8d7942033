//! `outgen`: tag, augment, evaluate and describe outline-conditioned story
//! corpora.
//!
//! Exit status: 0 on success, 1 on I/O failure, 2 on invalid input.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use outgen::tagger::TargetRelationSet;

use crate::commands::AugmentOptions;
use crate::config::{PipelineConfig, WeightSetting};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "outgen", version, about = "Outline-conditioned story generation toolkit")]
struct Cli {
    /// TOML pipeline configuration; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Abort on the first malformed or irregular input record.
    #[arg(long, global = true, conflicts_with = "permissive")]
    strict: bool,
    /// Skip malformed records and accept outlines of any length.
    #[arg(long, global = true)]
    permissive: bool,
    /// Metric weights: `lot-val`, `lot-test`, or six comma-separated numbers.
    #[arg(long, global = true, value_name = "WEIGHTS")]
    weights: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Outline/story examples (JSONL).
    #[arg(long, value_name = "FILE")]
    examples: Option<PathBuf>,
    /// Dependency parses (CoNLL-U).
    #[arg(long, value_name = "FILE")]
    parses: Option<PathBuf>,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Comma-separated target relations.
    #[arg(long, value_delimiter = ',', value_name = "LABELS")]
    targets: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Insert dependency markers into parsed stories.
    Tag {
        #[command(flatten)]
        common: Common,
    },
    /// Build training pairs from originals and accepted paraphrases.
    Augment {
        #[command(flatten)]
        common: Common,
        /// Paraphrase candidates (JSONL).
        #[arg(long, value_name = "FILE")]
        paraphrases: Option<PathBuf>,
        /// Emit only the original stories.
        #[arg(long)]
        originals_only: bool,
        /// Tag every target; needs parses for originals and paraphrases.
        #[arg(long)]
        tag: bool,
        /// Per-example acceptance report (JSON).
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        max_units: Option<usize>,
    },
    /// Score generated stories against the references.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Generated stories (JSONL with `id` and `story`).
        #[arg(long, value_name = "FILE")]
        generated: Option<PathBuf>,
        /// Combine six given scores (B-1 B-2 D-1 D-2 cover order) only.
        #[arg(long, num_args = 6, value_name = "SCORE", allow_negative_numbers = true)]
        aggregate_only: Option<Vec<f64>>,
        /// Label for the printed table.
        #[arg(long)]
        split: Option<String>,
    },
    /// Dataset statistics for one split.
    Stats {
        #[command(flatten)]
        common: Common,
        /// train, val or test; defaults to the examples file name.
        #[arg(long)]
        split: Option<String>,
    },
    /// Write plain {src, tgt} pairs for the original stories.
    EmitTraining {
        #[command(flatten)]
        common: Common,
        /// Tag the targets; needs parses.
        #[arg(long)]
        tag: bool,
        #[arg(long, value_name = "N")]
        max_units: Option<usize>,
    },
}

fn apply_common(cfg: &mut PipelineConfig, c: Common) -> Result<(), CliError> {
    cfg.examples = c.examples.or(cfg.examples.take());
    cfg.parses = c.parses.or(cfg.parses.take());
    cfg.output = c.output.or(cfg.output.take());
    if let Some(t) = c.targets {
        cfg.targets = TargetRelationSet::new(t)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if cli.strict {
        cfg.strict = true;
    }
    if cli.permissive {
        cfg.strict = false;
    }
    if let Some(w) = cli.weights {
        cfg.weights = match w.parse::<outgen::metrics::MetricWeights>() {
            Ok(parsed) => WeightSetting::Explicit(parsed.to_array().to_vec()),
            Err(e) => return Err(CliError::Validation(format!("--weights: {e}"))),
        };
    }

    match cli.command {
        Command::Tag { common } => {
            apply_common(&mut cfg, common)?;
            cfg.validate()?;
            commands::tag(&cfg)
        }
        Command::Augment {
            common,
            paraphrases,
            originals_only,
            tag,
            report,
            max_units,
        } => {
            apply_common(&mut cfg, common)?;
            cfg.paraphrases = paraphrases.or(cfg.paraphrases.take());
            cfg.report = report.or(cfg.report.take());
            cfg.max_units = max_units.unwrap_or(cfg.max_units);
            cfg.validate()?;
            commands::augment(&cfg, &AugmentOptions { originals_only, tag })
        }
        Command::Evaluate {
            common,
            generated,
            aggregate_only,
            split,
        } => {
            apply_common(&mut cfg, common)?;
            cfg.generated = generated.or(cfg.generated.take());
            cfg.split = split.or(cfg.split.take());
            cfg.validate()?;
            commands::evaluate(&cfg, aggregate_only.as_deref())
        }
        Command::Stats { common, split } => {
            apply_common(&mut cfg, common)?;
            cfg.split = split.or(cfg.split.take());
            cfg.validate()?;
            commands::stats(&cfg)
        }
        Command::EmitTraining { common, tag, max_units } => {
            apply_common(&mut cfg, common)?;
            cfg.max_units = max_units.unwrap_or(cfg.max_units);
            cfg.validate()?;
            commands::emit_training(&cfg, tag)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
