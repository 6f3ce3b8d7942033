use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};

use outgen::augment::{build_augmented_corpus, filter_all};
use outgen::corpus::{
    load_conllu, load_examples, load_generated, load_manifest, load_paraphrase_candidates, manifest_path, write_jsonl,
    write_training_pairs, DatasetSplit, LoadOptions, Origin, OutlineExample, ParsedStory, SplitName, TrainingRecord,
};
use outgen::metrics::{evaluate_corpus_with, format_table, overall, MetricScores, MetricWeights};
use outgen::stats::{dataset_stats, format_stats_table};
use outgen::tagger::{marker_counts, TaggedStory};
use serde::Serialize;

use crate::config::PipelineConfig;
use crate::error::{require_file, CliError};

fn output_path(cfg: &PipelineConfig) -> Result<PathBuf, CliError> {
    cfg.output.clone().ok_or_else(|| CliError::unset("output"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::write(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::write(path, e))
}

fn examples(cfg: &PipelineConfig) -> Result<Vec<OutlineExample>, CliError> {
    let path = require_file("examples", &cfg.examples, "examples")?;
    let report = load_examples(&path, LoadOptions { strict: cfg.strict })?;
    for skipped in &report.skipped {
        eprintln!(
            "warning: {}:{} skipped: {}",
            path.display(),
            skipped.line,
            skipped.reason
        );
    }
    if report.irregular_outlines > 0 {
        eprintln!(
            "warning: {} examples do not have 8 outline phrases",
            report.irregular_outlines
        );
    }
    if report.examples.is_empty() && cfg.strict {
        return Err(CliError::Validation(format!("no examples in {}", path.display())));
    }
    Ok(report.examples)
}

/// Checks the adapter manifest next to `data`, when there is one.
fn check_manifest(data: &Path, observed: usize) -> Result<(), CliError> {
    let path = manifest_path(data);
    if path.is_file() {
        load_manifest(&path)?.check_count(observed)?;
    }
    Ok(())
}

fn parses(cfg: &PipelineConfig) -> Result<Vec<ParsedStory>, CliError> {
    let path = require_file("parse", &cfg.parses, "parses")?;
    let parses = load_conllu(&path, None)?;
    check_manifest(&path, parses.len())?;
    Ok(parses)
}

/// Story parses for `examples`, checked against the story texts. Parses of
/// titles, outline phrases or paraphrases of known examples are passed over.
fn story_parses<'a>(examples: &[OutlineExample], parses: &'a [ParsedStory]) -> Result<Vec<&'a ParsedStory>, CliError> {
    let stories: HashMap<&str, &str> = examples.iter().map(|e| (e.id.as_str(), e.story.as_str())).collect();
    let mut out = Vec::new();
    for p in parses {
        if let Some(story) = stories.get(p.example_id.as_str()) {
            p.check_reconstruction(story)?;
            out.push(p);
        } else {
            let owner = p.example_id.rsplit_once('#').map(|(id, _)| id);
            if !owner.is_some_and(|id| stories.contains_key(id)) {
                return Err(CliError::Validation(format!(
                    "parse for unknown story {:?}",
                    p.example_id
                )));
            }
        }
    }
    Ok(out)
}

pub fn tag(cfg: &PipelineConfig) -> Result<(), CliError> {
    let examples = examples(cfg)?;
    let parses = parses(cfg)?;
    let output = output_path(cfg)?;
    let tagger = cfg.tagger();
    let tagged: Vec<TaggedStory> = story_parses(&examples, &parses)?
        .into_iter()
        .map(|p| tagger.tag_story(p))
        .collect();
    if tagged.len() < examples.len() {
        eprintln!("warning: {} examples have no parse", examples.len() - tagged.len());
    }
    write_jsonl(&output, &tagged)?;

    let mut totals: BTreeMap<String, usize> = tagger.targets.iter().map(|t| (t.to_owned(), 0)).collect();
    for t in &tagged {
        for (label, n) in marker_counts(&t.text, &tagger.targets) {
            *totals.entry(label).or_default() += n;
        }
    }
    println!("tagged {} stories -> {}", tagged.len(), output.display());
    let counts: Vec<String> = totals.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("markers: {}", counts.join(" "));
    Ok(())
}

pub struct AugmentOptions {
    pub originals_only: bool,
    pub tag: bool,
}

pub fn augment(cfg: &PipelineConfig, opts: &AugmentOptions) -> Result<(), CliError> {
    let examples = examples(cfg)?;
    let output = output_path(cfg)?;
    let sets = if opts.originals_only {
        Vec::new()
    } else {
        let path = cfg.paraphrases.clone().ok_or_else(|| {
            CliError::Validation("no paraphrase file given (pass --paraphrases, or --originals-only)".into())
        })?;
        let path = require_file("paraphrase", &Some(path), "paraphrases")?;
        let candidates = load_paraphrase_candidates(&path)?;
        check_manifest(&path, candidates.len())?;
        filter_all(&examples, &candidates, &cfg.filter)?
    };
    let mut corpus = build_augmented_corpus(&examples, &sets, &cfg.source_rule)?;
    let tagger = cfg.tagger();
    if opts.tag {
        corpus.tag_targets(&parses(cfg)?, &tagger)?;
    }
    let written = write_training_pairs(&corpus.to_training_records(), &output, cfg.max_units, &tagger.targets)?;
    if let Some(report) = &cfg.report {
        write_json(report, &corpus.report)?;
    }

    for r in &corpus.report {
        println!(
            "{}: {} of {} candidates accepted",
            r.example_id, r.accepted, r.candidates
        );
    }
    let paraphrases = corpus.pairs.iter().filter(|p| p.origin == Origin::Paraphrase).count();
    println!(
        "wrote {} pairs ({} original, {} paraphrase, {} truncated to {} units) -> {}",
        written.written,
        written.written - paraphrases,
        paraphrases,
        written.truncated,
        cfg.max_units,
        output.display()
    );
    Ok(())
}

pub fn emit_training(cfg: &PipelineConfig, tag: bool) -> Result<(), CliError> {
    let examples = examples(cfg)?;
    let output = output_path(cfg)?;
    let mut corpus = build_augmented_corpus(&examples, &[], &cfg.source_rule)?;
    let tagger = cfg.tagger();
    if tag {
        corpus.tag_targets(&parses(cfg)?, &tagger)?;
    }
    let records: Vec<TrainingRecord> = corpus
        .pairs
        .into_iter()
        .map(|p| TrainingRecord::pair(p.source, p.target))
        .collect();
    let written = write_training_pairs(&records, &output, cfg.max_units, &tagger.targets)?;
    println!(
        "wrote {} pairs ({} truncated to {} units) -> {}",
        written.written,
        written.truncated,
        cfg.max_units,
        output.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct AggregateReport {
    #[serde(flatten)]
    scores: MetricScores,
    overall: f64,
    weights: MetricWeights,
}

pub fn evaluate(cfg: &PipelineConfig, aggregate_only: Option<&[f64]>) -> Result<(), CliError> {
    let weights = cfg.metric_weights()?;
    if let Some(values) = aggregate_only {
        let arr: [f64; 6] = values
            .try_into()
            .map_err(|_| CliError::Validation(format!("--aggregate-only needs 6 scores, got {}", values.len())))?;
        if arr.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Validation("scores must be finite".into()));
        }
        let scores = MetricScores::from_array(arr);
        let report = AggregateReport {
            scores,
            overall: overall(&scores, &weights),
            weights,
        };
        print!("{}", format_table("scores", &scores, report.overall));
        if let Some(out) = &cfg.output {
            write_json(out, &report)?;
        }
        return Ok(());
    }

    let examples = examples(cfg)?;
    let gen_path = require_file("generated", &cfg.generated, "generated")?;
    let generated = load_generated(&gen_path)?;
    let by_id: HashMap<&str, &str> = generated.iter().map(|g| (g.id.as_str(), g.story.as_str())).collect();
    let known: HashSet<&str> = examples.iter().map(|e| e.id.as_str()).collect();
    let missing: Vec<&str> = examples
        .iter()
        .map(|e| e.id.as_str())
        .filter(|id| !by_id.contains_key(id))
        .collect();
    let extra: Vec<&str> = generated
        .iter()
        .map(|g| g.id.as_str())
        .filter(|id| !known.contains(id))
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(CliError::Validation(format!(
            "generated ids do not match the references; missing: [{}]; extra: [{}]",
            missing.join(", "),
            extra.join(", ")
        )));
    }

    let gen: Vec<&str> = examples.iter().map(|e| by_id[e.id.as_str()]).collect();
    let refs: Vec<&str> = examples.iter().map(|e| e.story.as_str()).collect();
    let outlines: Vec<Vec<&str>> = examples
        .iter()
        .map(|e| e.phrases.iter().map(String::as_str).collect())
        .collect();
    let mut report = evaluate_corpus_with(&gen, &refs, &outlines, &weights, &cfg.targets)?;
    for (row, e) in report.per_example.iter_mut().zip(&examples) {
        row.id = Some(e.id.clone());
    }
    let label = cfg.split.as_deref().unwrap_or("generated");
    print!("{}", report.table(label));
    if report.d1_degenerate || report.d2_degenerate {
        eprintln!("warning: generated corpus too short for distinct-n");
    }
    let flagged = report.per_example.iter().filter(|r| r.order_flagged).count();
    if flagged > 0 {
        eprintln!("warning: {flagged} stories have fewer than two phrases anchored; their order score is 0");
    }
    if let Some(out) = &cfg.output {
        write_json(out, &report)?;
    }
    Ok(())
}

fn split_name(cfg: &PipelineConfig, examples_path: &Path) -> Result<SplitName, CliError> {
    if let Some(name) = &cfg.split {
        return name
            .parse()
            .map_err(|_| CliError::Validation(format!("unknown split {name:?}")));
    }
    examples_path
        .file_stem()
        .and_then(|s| s.to_str())
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::unset("split"))
}

pub fn stats(cfg: &PipelineConfig) -> Result<(), CliError> {
    let path = require_file("examples", &cfg.examples, "examples")?;
    let name = split_name(cfg, &path)?;
    let examples = examples(cfg)?;
    let parses = match cfg.parses {
        Some(_) => Some(parses(cfg)?),
        None => None,
    };
    let report = dataset_stats(&DatasetSplit { name, examples }, parses.as_deref())?;
    print!("{}", format_stats_table(std::slice::from_ref(&report)));
    for flag in &report.flags {
        eprintln!("note: {flag}");
    }
    if let Some(out) = &cfg.output {
        write_json(out, &report)?;
    }
    Ok(())
}
