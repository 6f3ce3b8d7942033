//! Line-delimited JSON readers and writers.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::OutlineExample;
use crate::error::CorpusError;
use crate::tagger::{truncate_units, TargetRelationSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    /// Abort on the first invariant violation. When unset, violating lines
    /// are skipped and outlines of the wrong length are accepted.
    pub strict: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { strict: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

/// Result of loading an example file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub examples: Vec<OutlineExample>,
    /// Lines dropped in permissive mode.
    pub skipped: Vec<SkippedLine>,
    /// Accepted records whose outline does not have exactly 8 phrases.
    pub irregular_outlines: usize,
}

#[derive(Deserialize)]
struct RawExample {
    id: Option<String>,
    title: String,
    outline: Vec<String>,
    story: String,
}

/// Parses one example line. Records without an `id` (as in the public LOT
/// release) are given their 1-based line number as id.
pub fn parse_example_record(line: &str, line_no: usize, opts: LoadOptions) -> Result<OutlineExample, CorpusError> {
    let raw: RawExample = serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
        line: line_no,
        message: e.to_string(),
    })?;
    let example = OutlineExample {
        id: raw.id.unwrap_or_else(|| line_no.to_string()),
        title: raw.title,
        phrases: raw.outline,
        story: raw.story,
    };
    example
        .validate(opts.strict)
        .map_err(|(field, message)| CorpusError::InvalidField {
            line: line_no,
            field,
            message,
        })?;
    Ok(example)
}

pub fn read_examples<R: BufRead>(reader: R, opts: LoadOptions) -> Result<LoadReport, CorpusError> {
    let mut report = LoadReport::default();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| CorpusError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = parse_example_record(&line, line_no, opts).and_then(|ex| {
            if seen.contains(&ex.id) {
                Err(CorpusError::DuplicateId {
                    line: line_no,
                    id: ex.id,
                })
            } else {
                Ok(ex)
            }
        });
        match parsed {
            Ok(ex) => {
                if ex.phrases.len() != super::OUTLINE_LEN {
                    report.irregular_outlines += 1;
                }
                seen.insert(ex.id.clone());
                report.examples.push(ex);
            }
            Err(e) if opts.strict => return Err(e),
            Err(e) => report.skipped.push(SkippedLine {
                line: line_no,
                reason: e.to_string(),
            }),
        }
    }
    Ok(report)
}

pub fn load_examples(path: impl AsRef<Path>, opts: LoadOptions) -> Result<LoadReport, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    read_examples(BufReader::new(file), opts)
}

pub fn write_examples(path: impl AsRef<Path>, examples: &[OutlineExample]) -> Result<(), CorpusError> {
    write_jsonl(path.as_ref(), examples)
}

/// Raw paraphrase candidates for one example, as emitted by the paraphrase adapter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParaphraseCandidates {
    pub example_id: String,
    pub candidates: Vec<String>,
}

pub fn parse_paraphrase_record(line: &str, line_no: usize) -> Result<ParaphraseCandidates, CorpusError> {
    let rec: ParaphraseCandidates = serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
        line: line_no,
        message: e.to_string(),
    })?;
    if rec.example_id.is_empty() {
        return Err(CorpusError::InvalidField {
            line: line_no,
            field: "example_id",
            message: "example_id is empty".into(),
        });
    }
    Ok(rec)
}

pub fn load_paraphrase_candidates(path: impl AsRef<Path>) -> Result<Vec<ParaphraseCandidates>, CorpusError> {
    read_records(path.as_ref(), parse_paraphrase_record)
}

/// A model output to be scored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedStory {
    pub id: String,
    pub story: String,
}

pub fn parse_generated_record(line: &str, line_no: usize) -> Result<GeneratedStory, CorpusError> {
    serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
        line: line_no,
        message: e.to_string(),
    })
}

/// Loads generated stories; empty stories are allowed, duplicate ids are not.
pub fn load_generated(path: impl AsRef<Path>) -> Result<Vec<GeneratedStory>, CorpusError> {
    let records = read_records(path.as_ref(), parse_generated_record)?;
    let mut seen = HashSet::new();
    for (i, r) in records.iter().enumerate() {
        if !seen.insert(r.id.as_str()) {
            return Err(CorpusError::DuplicateId {
                line: i + 1,
                id: r.id.clone(),
            });
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Original,
    Paraphrase,
}

/// One line of a training file. `id` and `origin` are only present in the
/// augmented corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingRecord {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub id: Option<String>,
    pub src: String,
    pub tgt: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub origin: Option<Origin>,
}

impl TrainingRecord {
    pub fn pair(src: impl Into<String>, tgt: impl Into<String>) -> Self {
        TrainingRecord {
            id: None,
            src: src.into(),
            tgt: tgt.into(),
            origin: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct WriteReport {
    pub written: usize,
    pub truncated: usize,
}

/// Writes training records, truncating each target to `max_units` units
/// (characters, with each tag marker of `markers` counting as one unit).
pub fn write_training_pairs(
    records: &[TrainingRecord],
    path: impl AsRef<Path>,
    max_units: usize,
    markers: &TargetRelationSet,
) -> Result<WriteReport, CorpusError> {
    if max_units == 0 {
        return Err(CorpusError::InvalidValue("max_units must be at least 1".into()));
    }
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| CorpusError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut report = WriteReport::default();
    for rec in records {
        let (tgt, cut) = truncate_units(&rec.tgt, max_units, markers);
        if cut {
            report.truncated += 1;
        }
        let line = TrainingRecord {
            tgt: tgt.to_owned(),
            ..rec.clone()
        };
        serde_json::to_writer(&mut out, &line).map_err(|e| CorpusError::io(path, e.into()))?;
        out.write_all(b"\n").map_err(|e| CorpusError::io(path, e))?;
        report.written += 1;
    }
    out.flush().map_err(|e| CorpusError::io(path, e))?;
    Ok(report)
}

pub fn read_training_records(path: impl AsRef<Path>) -> Result<Vec<TrainingRecord>, CorpusError> {
    read_records(path.as_ref(), |line, line_no| {
        serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
            line: line_no,
            message: e.to_string(),
        })
    })
}

/// Writes one compact JSON object per line.
pub fn write_jsonl<T: Serialize>(path: impl AsRef<Path>, items: &[T]) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| CorpusError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(|e| CorpusError::io(path, e.into()))?;
        out.write_all(b"\n").map_err(|e| CorpusError::io(path, e))?;
    }
    out.flush().map_err(|e| CorpusError::io(path, e))
}

fn read_records<T>(path: &Path, parse: impl Fn(&str, usize) -> Result<T, CorpusError>) -> Result<Vec<T>, CorpusError> {
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CorpusError::Malformed {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse(&line, idx + 1)?);
    }
    Ok(out)
}
