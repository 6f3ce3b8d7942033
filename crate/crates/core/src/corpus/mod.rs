//! Domain types for the OutGen corpus and the interchange file formats that
//! carry them between the external tools and this pipeline.
//!
//! * Example files: JSONL with `id`, `title`, `outline` (8 phrases), `story`.
//! * Parse files: CoNLL-U, one block of sentences per story, introduced by
//!   `# example_id = …` and with `# sent_id = …` before every sentence.
//! * Paraphrase files: JSONL with `example_id` and `candidates`.
//! * Training files: JSONL with `src` and `tgt` (plus `id`/`origin` for the
//!   augmented corpus).

pub mod conllu;
pub mod jsonl;
pub mod manifest;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

pub use conllu::{load_conllu, parse_conllu, to_conllu_string, write_conllu, ReferenceTexts};
pub use jsonl::{
    load_examples, load_generated, load_paraphrase_candidates, parse_example_record, parse_generated_record,
    parse_paraphrase_record, read_examples, read_training_records, write_examples, write_jsonl, write_training_pairs,
    GeneratedStory, LoadOptions, LoadReport, Origin, ParaphraseCandidates, SkippedLine, TrainingRecord, WriteReport,
};
pub use manifest::{load_manifest, manifest_path, write_manifest, AdapterManifest, ToolInfo};

/// Number of phrases in every OutGen outline.
pub const OUTLINE_LEN: usize = 8;

/// One benchmark record: a title, the unordered outline and the reference story.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutlineExample {
    pub id: String,
    pub title: String,
    #[serde(rename = "outline")]
    pub phrases: Vec<String>,
    pub story: String,
}

impl OutlineExample {
    /// Checks the per-record invariants. The phrase count is only enforced
    /// when `require_full_outline` is set.
    pub fn validate(&self, require_full_outline: bool) -> Result<(), (&'static str, String)> {
        if self.id.is_empty() {
            return Err(("id", "id is empty".into()));
        }
        if require_full_outline && self.phrases.len() != OUTLINE_LEN {
            return Err((
                "outline",
                format!("expected {OUTLINE_LEN} phrases, found {}", self.phrases.len()),
            ));
        }
        if self.phrases.is_empty() {
            return Err(("outline", "outline has no phrases".into()));
        }
        if let Some(i) = self.phrases.iter().position(|p| p.is_empty()) {
            return Err(("outline", format!("phrase {i} is empty")));
        }
        if self.story.is_empty() {
            return Err(("story", "story is empty".into()));
        }
        Ok(())
    }
}

/// A word segment as produced by the external segmenter / parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSegment {
    text: String,
    token_count: usize,
}

impl WordSegment {
    pub fn new(text: impl Into<String>) -> Result<Self, CorpusError> {
        let text = text.into();
        if text.is_empty() {
            return Err(CorpusError::InvalidValue("word segment is empty".into()));
        }
        if text.contains(['\t', '\n', '\r']) {
            return Err(CorpusError::InvalidValue(format!(
                "word segment {text:?} contains a tab or line break"
            )));
        }
        let token_count = text.chars().count();
        Ok(WordSegment { text, token_count })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Number of characters (Unicode scalar values) in the segment.
    pub fn token_count(&self) -> usize {
        self.token_count
    }
}

/// Head of a dependency arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Head {
    Root,
    /// 0-based index of the head segment within the sentence.
    Segment(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyArc {
    pub dependent: usize,
    pub head: Head,
    pub relation: String,
}

/// Label that must accompany (and only accompany) attachment to the root.
pub const ROOT_LABEL: &str = "root";

/// A sentence: its segments, and exactly one arc per segment in segment order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSentence {
    pub sent_id: String,
    segments: Vec<WordSegment>,
    arcs: Vec<DependencyArc>,
}

impl ParsedSentence {
    /// Builds a sentence, checking that the arcs form a single-rooted tree
    /// over the segments.
    pub fn new(
        sent_id: impl Into<String>,
        segments: Vec<WordSegment>,
        arcs: Vec<DependencyArc>,
    ) -> Result<Self, CorpusError> {
        let sent_id = sent_id.into();
        check_tree(&segments, &arcs).map_err(|m| CorpusError::InvalidValue(format!("sentence `{sent_id}`: {m}")))?;
        Ok(ParsedSentence {
            sent_id,
            segments,
            arcs,
        })
    }

    pub fn segments(&self) -> &[WordSegment] {
        &self.segments
    }

    pub fn arcs(&self) -> &[DependencyArc] {
        &self.arcs
    }

    /// Segments paired with their arcs.
    pub fn iter(&self) -> impl Iterator<Item = (&WordSegment, &DependencyArc)> {
        self.segments.iter().zip(&self.arcs)
    }

    pub fn text(&self) -> String {
        self.segments.iter().map(|s| s.text()).collect()
    }
}

/// Returns a description of the first tree violation, if any.
pub(crate) fn check_tree(segments: &[WordSegment], arcs: &[DependencyArc]) -> Result<(), String> {
    let n = segments.len();
    if n == 0 {
        return Err("sentence has no segments".into());
    }
    if arcs.len() != n {
        return Err(format!("{} arcs for {} segments", arcs.len(), n));
    }
    let mut roots = 0;
    for (i, arc) in arcs.iter().enumerate() {
        if arc.dependent != i {
            return Err(format!("arc {i} has dependent {}", arc.dependent));
        }
        if arc.relation.is_empty() {
            return Err(format!("segment {i} has an empty relation"));
        }
        let is_root_label = arc.relation == ROOT_LABEL;
        match arc.head {
            Head::Root => {
                roots += 1;
                if !is_root_label {
                    return Err(format!(
                        "segment {i} attaches to the root with relation `{}`",
                        arc.relation
                    ));
                }
            }
            Head::Segment(h) => {
                if h >= n {
                    return Err(format!("segment {i} has head {h} out of range"));
                }
                if h == i {
                    return Err(format!("segment {i} is its own head"));
                }
                if is_root_label {
                    return Err(format!("segment {i} is labelled root but has head {h}"));
                }
            }
        }
    }
    if roots != 1 {
        return Err(format!("expected exactly one root, found {roots}"));
    }
    // every chain must reach the root within n steps
    for start in 0..n {
        let mut cur = start;
        let mut steps = 0;
        while let Head::Segment(h) = arcs[cur].head {
            cur = h;
            steps += 1;
            if steps > n {
                return Err(format!("cyclic head chain through segment {start}"));
            }
        }
    }
    Ok(())
}

/// A story as the parser sees it: a sequence of dependency-parsed sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedStory {
    pub example_id: String,
    pub sentences: Vec<ParsedSentence>,
}

impl ParsedStory {
    /// Concatenation of all segment texts.
    pub fn text(&self) -> String {
        self.sentences
            .iter()
            .flat_map(|s| s.segments())
            .map(|s| s.text())
            .collect()
    }

    pub fn segment_count(&self) -> usize {
        self.sentences.iter().map(|s| s.segments().len()).sum()
    }

    /// Checks that the segments reproduce `story`, ignoring whitespace.
    pub fn check_reconstruction(&self, story: &str) -> Result<(), CorpusError> {
        let parsed = self.text();
        match first_divergence(&parsed, story) {
            None => Ok(()),
            Some(offset) => Err(CorpusError::Reconstruction {
                example_id: self.example_id.clone(),
                offset,
            }),
        }
    }
}

/// Offset (in non-whitespace characters) of the first difference between
/// two texts once whitespace is removed from both.
pub fn first_divergence(a: &str, b: &str) -> Option<usize> {
    let mut xs = a.chars().filter(|c| !c.is_whitespace());
    let mut ys = b.chars().filter(|c| !c.is_whitespace());
    let mut offset = 0;
    loop {
        match (xs.next(), ys.next()) {
            (None, None) => return None,
            (x, y) if x == y => offset += 1,
            _ => return Some(offset),
        }
    }
}

/// Character count ignoring whitespace.
pub fn visible_char_count(text: &str) -> usize {
    text.chars().filter(|c| !c.is_whitespace()).count()
}

/// Id under which the parse of the `k`-th accepted paraphrase (1-based) of
/// an example is stored.
pub fn paraphrase_story_id(example_id: &str, k: usize) -> String {
    format!("{example_id}#p{k}")
}

/// Id under which the parse of an example's title is stored.
pub fn title_parse_id(example_id: &str) -> String {
    format!("{example_id}#title")
}

/// Id under which the parse of outline phrase `k` (0-based) is stored.
pub fn phrase_parse_id(example_id: &str, k: usize) -> String {
    format!("{example_id}#o{k}")
}

/// Candidate and accepted paraphrases for one example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParaphraseSet {
    pub example_id: String,
    pub candidates: Vec<String>,
    pub accepted: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitName {
    Train,
    Val,
    Test,
}

impl SplitName {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitName::Train => "train",
            SplitName::Val => "val",
            SplitName::Test => "test",
        }
    }
}

impl fmt::Display for SplitName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitName {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(SplitName::Train),
            "val" => Ok(SplitName::Val),
            "test" => Ok(SplitName::Test),
            other => Err(CorpusError::InvalidValue(format!(
                "unknown split `{other}` (expected train, val or test)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub name: SplitName,
    pub examples: Vec<OutlineExample>,
}
