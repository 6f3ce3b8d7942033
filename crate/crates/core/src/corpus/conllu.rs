//! CoNLL-U reader and writer for parsed stories.
//!
//! Only ID, FORM, HEAD and DEPREL are interpreted. Multiword-token ranges
//! (`1-2`) and empty nodes (`1.1`) are skipped. Each story starts with a
//! `# example_id = …` comment and each sentence carries `# sent_id = …`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{DependencyArc, Head, ParsedSentence, ParsedStory, WordSegment};
use crate::error::CorpusError;

/// Story texts keyed by id, used to check that parses reconstruct them.
pub type ReferenceTexts = HashMap<String, String>;

struct Row {
    line: usize,
    form: String,
    head: usize,
    deprel: String,
}

#[derive(Default)]
struct State {
    stories: Vec<ParsedStory>,
    seen: HashSet<String>,
    sent_id: Option<String>,
    sent_line: usize,
    rows: Vec<Row>,
}

impl State {
    fn finish_sentence(&mut self) -> Result<(), CorpusError> {
        if self.rows.is_empty() {
            return Ok(());
        }
        let rows = std::mem::take(&mut self.rows);
        let sent_line = self.sent_line;
        let Some(story) = self.stories.last_mut() else {
            return Err(CorpusError::Conllu {
                line: sent_line,
                message: "sentence before any `# example_id` comment".into(),
            });
        };
        let Some(sent_id) = self.sent_id.take() else {
            return Err(CorpusError::Conllu {
                line: sent_line,
                message: "sentence without `# sent_id` comment".into(),
            });
        };
        let n = rows.len();
        let mut segments = Vec::with_capacity(n);
        let mut arcs = Vec::with_capacity(n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.head > n {
                return Err(CorpusError::Conllu {
                    line: row.line,
                    message: format!("HEAD {} out of range for a sentence of {n} tokens", row.head),
                });
            }
            segments.push(WordSegment::new(row.form).map_err(|e| CorpusError::Conllu {
                line: row.line,
                message: e.to_string(),
            })?);
            arcs.push(DependencyArc {
                dependent: i,
                head: if row.head == 0 {
                    Head::Root
                } else {
                    Head::Segment(row.head - 1)
                },
                relation: row.deprel,
            });
        }
        let sentence = ParsedSentence::new(sent_id, segments, arcs).map_err(|e| CorpusError::Conllu {
            line: sent_line,
            message: e.to_string(),
        })?;
        story.sentences.push(sentence);
        Ok(())
    }

    fn finish_story(&mut self, line: usize) -> Result<(), CorpusError> {
        self.finish_sentence()?;
        if let Some(last) = self.stories.last() {
            if last.sentences.is_empty() {
                return Err(CorpusError::Conllu {
                    line,
                    message: format!("story `{}` has no sentences", last.example_id),
                });
            }
        }
        Ok(())
    }
}

fn comment_value<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    let rest = comment.strip_prefix(key)?.trim_start();
    Some(rest.strip_prefix('=')?.trim())
}

/// Parses CoNLL-U text. When `refs` is given, every story id must be present
/// in it and the segments must reproduce the referenced text (ignoring
/// whitespace).
pub fn parse_conllu(input: &str, refs: Option<&ReferenceTexts>) -> Result<Vec<ParsedStory>, CorpusError> {
    let mut st = State::default();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            st.finish_sentence()?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if !st.rows.is_empty() {
                return Err(CorpusError::Conllu {
                    line: line_no,
                    message: "comment inside a sentence".into(),
                });
            }
            if let Some(id) = comment_value(comment, "example_id") {
                st.finish_story(line_no)?;
                if id.is_empty() {
                    return Err(CorpusError::Conllu {
                        line: line_no,
                        message: "empty example_id".into(),
                    });
                }
                if !st.seen.insert(id.to_owned()) {
                    return Err(CorpusError::DuplicateId {
                        line: line_no,
                        id: id.to_owned(),
                    });
                }
                st.stories.push(ParsedStory {
                    example_id: id.to_owned(),
                    sentences: Vec::new(),
                });
            } else if let Some(id) = comment_value(comment, "sent_id") {
                st.sent_id = Some(id.to_owned());
                st.sent_line = line_no;
            }
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(CorpusError::Conllu {
                line: line_no,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0].parse().map_err(|_| CorpusError::Conllu {
            line: line_no,
            message: format!("bad ID `{}`", cols[0]),
        })?;
        if st.rows.is_empty() && st.sent_id.is_none() {
            return Err(CorpusError::Conllu {
                line: line_no,
                message: "sentence without `# sent_id` comment".into(),
            });
        }
        if id != st.rows.len() + 1 {
            return Err(CorpusError::Conllu {
                line: line_no,
                message: format!("expected ID {}, found {id}", st.rows.len() + 1),
            });
        }
        let head: usize = cols[6].parse().map_err(|_| CorpusError::Conllu {
            line: line_no,
            message: format!("bad HEAD `{}`", cols[6]),
        })?;
        let deprel = cols[7];
        if deprel.is_empty() || deprel == "_" {
            return Err(CorpusError::Conllu {
                line: line_no,
                message: "DEPREL is missing".into(),
            });
        }
        let form = cols[1];
        if form.is_empty() {
            return Err(CorpusError::Conllu {
                line: line_no,
                message: "FORM is empty".into(),
            });
        }
        st.rows.push(Row {
            line: line_no,
            form: form.to_owned(),
            head,
            deprel: deprel.to_owned(),
        });
    }
    let end = input.lines().count() + 1;
    st.finish_story(end)?;

    if let Some(refs) = refs {
        for story in &st.stories {
            let text = refs
                .get(&story.example_id)
                .ok_or_else(|| CorpusError::UnknownStory(story.example_id.clone()))?;
            story.check_reconstruction(text)?;
        }
    }
    Ok(st.stories)
}

pub fn load_conllu(path: impl AsRef<Path>, refs: Option<&ReferenceTexts>) -> Result<Vec<ParsedStory>, CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
    parse_conllu(&text, refs)
}

/// Serializes stories as CoNLL-U (unused columns are `_`).
pub fn to_conllu_string(stories: &[ParsedStory]) -> String {
    let mut out = String::new();
    for story in stories {
        let _ = writeln!(out, "# example_id = {}", story.example_id);
        for sentence in &story.sentences {
            let _ = writeln!(out, "# sent_id = {}", sentence.sent_id);
            let _ = writeln!(out, "# text = {}", sentence.text());
            for (i, (seg, arc)) in sentence.iter().enumerate() {
                let head = match arc.head {
                    Head::Root => 0,
                    Head::Segment(h) => h + 1,
                };
                let _ = writeln!(
                    out,
                    "{}\t{}\t_\t_\t_\t_\t{}\t{}\t_\t_",
                    i + 1,
                    seg.text(),
                    head,
                    arc.relation
                );
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_conllu(path: impl AsRef<Path>, stories: &[ParsedStory]) -> Result<(), CorpusError> {
    let path = path.as_ref();
    fs::write(path, to_conllu_string(stories)).map_err(|e| CorpusError::io(path, e))
}
