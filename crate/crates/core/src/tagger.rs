//! Inline dependency-role markers.
//!
//! A segment whose relation is one of the target relations is followed by
//! the literal marker `<relation>`; everything else is copied verbatim.
//! Text that already contains a marker-shaped string is escaped with a
//! backslash (`\<nsubj>`) so that [`strip_tags`] always recovers the
//! untagged story exactly. Backslash runs in front of a marker-shaped string
//! are doubled, in the usual way, so an odd run means "literal" and an even
//! run means "marker".

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{DependencyArc, ParsedStory};
use crate::error::CorpusError;

/// The relations that receive inline markers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TargetRelationSet {
    relations: BTreeSet<String>,
}

impl TargetRelationSet {
    pub const DEFAULT: [&'static str; 4] = ["nsubj", "root", "dobj", "pobj"];

    pub fn new<I, S>(labels: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let relations: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        if relations.is_empty() {
            return Err(CorpusError::InvalidValue("target relation set is empty".into()));
        }
        for label in &relations {
            if label.is_empty() || !label.chars().all(is_label_char) {
                return Err(CorpusError::InvalidValue(format!(
                    "relation label `{label}` is not lowercase ASCII"
                )));
            }
        }
        Ok(TargetRelationSet { relations })
    }

    pub fn contains(&self, label: &str) -> bool {
        self.relations.contains(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.relations.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

impl Default for TargetRelationSet {
    fn default() -> Self {
        TargetRelationSet {
            relations: Self::DEFAULT.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl TryFrom<Vec<String>> for TargetRelationSet {
    type Error = CorpusError;

    fn try_from(v: Vec<String>) -> Result<Self, Self::Error> {
        TargetRelationSet::new(v)
    }
}

impl From<TargetRelationSet> for Vec<String> {
    fn from(t: TargetRelationSet) -> Self {
        t.relations.into_iter().collect()
    }
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_lowercase() || c == ':' || c == '_'
}

/// Parser label → canonical label, applied before target filtering.
pub fn default_aliases() -> BTreeMap<String, String> {
    [("obj".to_owned(), "dobj".to_owned())].into_iter().collect()
}

/// A tagged story, as written to the tagged-corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedStory {
    #[serde(rename = "id")]
    pub example_id: String,
    #[serde(rename = "tagged_story")]
    pub text: String,
    pub marker_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tagger {
    pub targets: TargetRelationSet,
    pub aliases: BTreeMap<String, String>,
}

impl Default for Tagger {
    fn default() -> Self {
        Tagger::new(TargetRelationSet::default())
    }
}

impl Tagger {
    /// A tagger with the default label aliases.
    pub fn new(targets: TargetRelationSet) -> Self {
        Tagger {
            targets,
            aliases: default_aliases(),
        }
    }

    pub fn canonical<'a>(&'a self, relation: &'a str) -> &'a str {
        self.aliases.get(relation).map_or(relation, String::as_str)
    }

    /// The arcs whose (aliased) relation is a target, in dependent order.
    /// Returned arcs carry the canonical label.
    pub fn select_targets(&self, arcs: &[DependencyArc]) -> Vec<DependencyArc> {
        let mut selected: Vec<DependencyArc> = arcs
            .iter()
            .filter(|a| self.targets.contains(self.canonical(&a.relation)))
            .map(|a| DependencyArc {
                relation: self.canonical(&a.relation).to_owned(),
                ..a.clone()
            })
            .collect();
        selected.sort_by_key(|a| a.dependent);
        selected
    }

    pub fn tag_story(&self, story: &ParsedStory) -> TaggedStory {
        let mut text = String::new();
        let mut pending = String::new();
        let mut marker_count = 0;
        for sentence in &story.sentences {
            for (seg, arc) in sentence.iter() {
                pending.push_str(seg.text());
                let rel = self.canonical(&arc.relation);
                if self.targets.contains(rel) {
                    escape_into(&mut text, &pending, true, &self.targets);
                    pending.clear();
                    text.push('<');
                    text.push_str(rel);
                    text.push('>');
                    marker_count += 1;
                }
            }
        }
        escape_into(&mut text, &pending, false, &self.targets);
        TaggedStory {
            example_id: story.example_id.clone(),
            text,
            marker_count,
        }
    }

    pub fn strip_tags(&self, text: &str) -> String {
        strip_tags(text, &self.targets)
    }
}

/// Byte end of a `<label>` with `label` in `targets` starting at `i`.
fn marker_at(text: &str, i: usize, targets: &TargetRelationSet) -> Option<usize> {
    let rest = text.get(i..)?;
    let inner = rest.strip_prefix('<')?;
    let close = inner.find(|c: char| !is_label_char(c))?;
    if inner.as_bytes()[close] != b'>' || close == 0 {
        return None;
    }
    targets.contains(&inner[..close]).then_some(i + close + 2)
}

fn backslash_run(bytes: &[u8], i: usize) -> usize {
    bytes[i..].iter().take_while(|&&b| b == b'\\').count()
}

fn push_backslashes(out: &mut String, n: usize) {
    out.extend(std::iter::repeat_n('\\', n));
}

/// Appends `raw` so that it decodes back to itself. `before_marker` means a
/// real marker follows immediately, so a trailing backslash run must be
/// doubled.
fn escape_into(out: &mut String, raw: &str, before_marker: bool, targets: &TargetRelationSet) {
    let bytes = raw.as_bytes();
    let mut i = 0;
    while i < raw.len() {
        if bytes[i] == b'\\' {
            let k = backslash_run(bytes, i);
            let j = i + k;
            if let Some(end) = marker_at(raw, j, targets) {
                push_backslashes(out, 2 * k + 1);
                out.push_str(&raw[j..end]);
                i = end;
            } else if j == raw.len() && before_marker {
                push_backslashes(out, 2 * k);
                i = j;
            } else {
                push_backslashes(out, k);
                i = j;
            }
        } else if let Some(end) = marker_at(raw, i, targets) {
            out.push('\\');
            out.push_str(&raw[i..end]);
            i = end;
        } else {
            let c = raw[i..].chars().next().expect("in bounds");
            out.push(c);
            i += c.len_utf8();
        }
    }
}

/// Removes every marker `<r>` for `r` in `targets` and undoes escaping.
/// Other angle-bracket content is left alone.
pub fn strip_tags(text: &str, targets: &TargetRelationSet) -> String {
    let mut out = String::with_capacity(text.len());
    for piece in scan(text, targets) {
        match piece {
            Piece::Text(s) => out.push_str(s),
            Piece::Backslashes { decoded, .. } => push_backslashes(&mut out, decoded),
            Piece::Literal(s) => out.push_str(s),
            Piece::Marker(_) => {}
        }
    }
    out
}

#[derive(Debug)]
enum Piece<'a> {
    /// One verbatim character.
    Text(&'a str),
    /// An escape run of `raw` backslashes standing for `decoded` ones.
    Backslashes {
        raw: usize,
        decoded: usize,
    },
    /// An escaped marker-shaped string, kept as text.
    Literal(&'a str),
    Marker(&'a str),
}

fn scan<'a>(text: &'a str, targets: &'a TargetRelationSet) -> impl Iterator<Item = Piece<'a>> + 'a {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut queued: Option<Piece<'a>> = None;
    std::iter::from_fn(move || {
        if let Some(p) = queued.take() {
            return Some(p);
        }
        if i >= text.len() {
            return None;
        }
        if bytes[i] == b'\\' {
            let k = backslash_run(bytes, i);
            let j = i + k;
            if let Some(end) = marker_at(text, j, targets) {
                let shape = &text[j..end];
                queued = Some(if k % 2 == 1 {
                    Piece::Literal(shape)
                } else {
                    Piece::Marker(&shape[1..shape.len() - 1])
                });
                i = end;
                return Some(Piece::Backslashes { raw: k, decoded: k / 2 });
            }
            i = j;
            return Some(Piece::Backslashes { raw: k, decoded: k });
        }
        if let Some(end) = marker_at(text, i, targets) {
            let label = &text[i + 1..end - 1];
            i = end;
            return Some(Piece::Marker(label));
        }
        let c = text[i..].chars().next().expect("in bounds");
        let s = &text[i..i + c.len_utf8()];
        i += c.len_utf8();
        Some(Piece::Text(s))
    })
}

/// Number of markers (not escaped lookalikes) in `text`.
pub fn count_markers(text: &str, targets: &TargetRelationSet) -> usize {
    scan(text, targets).filter(|p| matches!(p, Piece::Marker(_))).count()
}

/// Marker occurrences per relation.
pub fn marker_counts(text: &str, targets: &TargetRelationSet) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for p in scan(text, targets) {
        if let Piece::Marker(label) = p {
            *counts.entry(label.to_owned()).or_insert(0) += 1;
        }
    }
    counts
}

/// Byte offsets at which each unit ends. A unit is one character, except a
/// marker which is a single unit.
fn unit_ends(text: &str, targets: &TargetRelationSet) -> Vec<usize> {
    let mut ends = Vec::new();
    let mut pos = 0;
    for piece in scan(text, targets) {
        match piece {
            Piece::Text(s) => {
                pos += s.len();
                ends.push(pos);
            }
            Piece::Backslashes { raw, .. } => {
                for _ in 0..raw {
                    pos += 1;
                    ends.push(pos);
                }
            }
            Piece::Literal(s) => {
                for c in s.chars() {
                    pos += c.len_utf8();
                    ends.push(pos);
                }
            }
            Piece::Marker(label) => {
                pos += label.len() + 2;
                ends.push(pos);
            }
        }
    }
    ends
}

pub fn count_units(text: &str, targets: &TargetRelationSet) -> usize {
    unit_ends(text, targets).len()
}

/// Keeps the first `max_units` units of `text`. Returns the kept prefix and
/// whether anything was cut.
pub fn truncate_units<'a>(text: &'a str, max_units: usize, targets: &TargetRelationSet) -> (&'a str, bool) {
    let ends = unit_ends(text, targets);
    if ends.len() <= max_units {
        (text, false)
    } else if max_units == 0 {
        ("", true)
    } else {
        (&text[..ends[max_units - 1]], true)
    }
}
