//! Dataset statistics in the layout of the OutGen data table.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{phrase_parse_id, title_parse_id, visible_char_count, DatasetSplit, ParsedStory};
use crate::error::CorpusError;

const TERMINATORS: [char; 4] = ['。', '！', '？', '；'];
const CLOSING_QUOTES: [char; 6] = ['”', '’', '」', '』', '"', '\''];

/// Splits after 。！？；, keeping any run of further terminators and closing
/// quotes with the sentence. A trailing fragment without a terminator is a
/// sentence of its own; whitespace-only pieces are dropped.
pub fn sentence_split(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((_, c)) = chars.next() {
        if !TERMINATORS.contains(&c) {
            continue;
        }
        while let Some(&(_, next)) = chars.peek() {
            if TERMINATORS.contains(&next) || CLOSING_QUOTES.contains(&next) {
                chars.next();
            } else {
                break;
            }
        }
        let end = chars.peek().map_or(text.len(), |&(i, _)| i);
        push_trimmed(&mut out, &text[start..end]);
        start = end;
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed<'a>(out: &mut Vec<&'a str>, piece: &'a str) {
    let piece = piece.trim();
    if !piece.is_empty() {
        out.push(piece);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub split: String,
    pub example_count: usize,
    pub vocab_size: usize,
    /// `"word"` when counted over parser segments, `"char"` otherwise.
    pub vocab_unit: String,
    pub avg_title_words: Option<f64>,
    pub avg_outline_words: Option<f64>,
    pub avg_outline_phrases: f64,
    pub avg_story_chars: f64,
    pub avg_story_words: Option<f64>,
    pub avg_story_sents: f64,
    pub total_story_chars: usize,
    /// Fields that could not be computed and why.
    pub flags: Vec<String>,
}

fn add_vocab<'a>(vocab: &mut HashSet<&'a str>, parse: &'a ParsedStory) {
    vocab.extend(parse.sentences.iter().flat_map(|s| s.segments()).map(|s| s.text()));
}

fn mean(total: usize, n: usize) -> f64 {
    total as f64 / n as f64
}

/// Computes the statistics of one split. Word-level fields need parses:
/// story parses under the example id, and optionally title and outline
/// parses under `id#title` / `id#oK`.
pub fn dataset_stats(split: &DatasetSplit, parses: Option<&[ParsedStory]>) -> Result<StatsReport, CorpusError> {
    let examples = &split.examples;
    if examples.is_empty() {
        return Err(CorpusError::InvalidValue(format!("split `{}` is empty", split.name)));
    }
    let n = examples.len();
    let total_story_chars: usize = examples.iter().map(|e| visible_char_count(&e.story)).sum();
    let total_phrases: usize = examples.iter().map(|e| e.phrases.len()).sum();
    let total_sents: usize = examples.iter().map(|e| sentence_split(&e.story).len()).sum();

    let mut report = StatsReport {
        split: split.name.to_string(),
        example_count: n,
        vocab_size: 0,
        vocab_unit: "char".into(),
        avg_title_words: None,
        avg_outline_words: None,
        avg_outline_phrases: mean(total_phrases, n),
        avg_story_chars: mean(total_story_chars, n),
        avg_story_words: None,
        avg_story_sents: mean(total_sents, n),
        total_story_chars,
        flags: Vec::new(),
    };

    let Some(parses) = parses else {
        let chars: HashSet<char> = examples
            .iter()
            .flat_map(|e| e.story.chars())
            .filter(|c| !c.is_whitespace())
            .collect();
        report.vocab_size = chars.len();
        report
            .flags
            .push("no parses: vocabulary counted in characters, word averages omitted".into());
        return Ok(report);
    };

    let by_id: HashMap<&str, &ParsedStory> = parses.iter().map(|p| (p.example_id.as_str(), p)).collect();
    let mut vocab: HashSet<&str> = HashSet::new();
    let mut story_words = 0;
    for e in examples {
        let p = by_id
            .get(e.id.as_str())
            .ok_or_else(|| CorpusError::MissingParse(e.id.clone()))?;
        story_words += p.segment_count();
        add_vocab(&mut vocab, p);
    }
    report.avg_story_words = Some(mean(story_words, n));

    let titles: Option<Vec<&ParsedStory>> = examples
        .iter()
        .map(|e| by_id.get(title_parse_id(&e.id).as_str()).copied())
        .collect();
    match titles {
        Some(titles) => {
            report.avg_title_words = Some(mean(titles.iter().map(|p| p.segment_count()).sum(), n));
            titles.iter().for_each(|p| add_vocab(&mut vocab, p));
        }
        None => report
            .flags
            .push("title parses missing: avg_title_words omitted".into()),
    }

    let phrases: Option<Vec<&ParsedStory>> = examples
        .iter()
        .flat_map(|e| (0..e.phrases.len()).map(move |k| phrase_parse_id(&e.id, k)))
        .map(|id| by_id.get(id.as_str()).copied())
        .collect();
    match phrases {
        Some(phrases) => {
            report.avg_outline_words = Some(mean(phrases.iter().map(|p| p.segment_count()).sum(), n));
            phrases.iter().for_each(|p| add_vocab(&mut vocab, p));
        }
        None => report
            .flags
            .push("outline parses missing: avg_outline_words omitted".into()),
    }

    report.vocab_size = vocab.len();
    report.vocab_unit = "word".into();
    Ok(report)
}

/// Aligned text table, one column per report.
pub fn format_stats_table(reports: &[StatsReport]) -> String {
    fn opt(v: Option<f64>) -> String {
        v.map_or_else(|| "n/a".into(), |x| format!("{x:.2}"))
    }
    let rows: Vec<(&str, Vec<String>)> = vec![
        (
            "# Examples",
            reports.iter().map(|r| r.example_count.to_string()).collect(),
        ),
        (
            "Vocabulary Size",
            reports
                .iter()
                .map(|r| {
                    if r.vocab_unit == "word" {
                        r.vocab_size.to_string()
                    } else {
                        format!("{} (chars)", r.vocab_size)
                    }
                })
                .collect(),
        ),
        (
            "Avg. # Word in Input Title",
            reports.iter().map(|r| opt(r.avg_title_words)).collect(),
        ),
        (
            "Avg. # Word in Input Outline",
            reports.iter().map(|r| opt(r.avg_outline_words)).collect(),
        ),
        (
            "Avg. # Phrase in Input Outline",
            reports
                .iter()
                .map(|r| format!("{:.2}", r.avg_outline_phrases))
                .collect(),
        ),
        (
            "Avg. # Char in Output Text",
            reports.iter().map(|r| format!("{:.2}", r.avg_story_chars)).collect(),
        ),
        (
            "Avg. # Word in Output Text",
            reports.iter().map(|r| opt(r.avg_story_words)).collect(),
        ),
        (
            "Avg. # Sent in Output Text",
            reports.iter().map(|r| format!("{:.2}", r.avg_story_sents)).collect(),
        ),
    ];
    let mut out = String::new();
    let _ = write!(out, "{:<32}", "Datasets");
    for r in reports {
        let _ = write!(out, "{:>14}", r.split);
    }
    out.push('\n');
    for (label, cells) in rows {
        let _ = write!(out, "{label:<32}");
        for c in cells {
            let _ = write!(out, "{c:>14}");
        }
        out.push('\n');
    }
    out
}
