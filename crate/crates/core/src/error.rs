use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while reading, validating or writing corpus files.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: invalid field `{field}`: {message}")]
    InvalidField {
        line: usize,
        field: &'static str,
        message: String,
    },

    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },

    #[error("line {line}: CoNLL-U: {message}")]
    Conllu { line: usize, message: String },

    #[error("parse of `{example_id}` does not reconstruct its story: first divergence at character {offset}")]
    Reconstruction { example_id: String, offset: usize },

    #[error("parse block refers to unknown story `{0}`")]
    UnknownStory(String),

    #[error("no parse for story `{0}`")]
    MissingParse(String),

    #[error("paraphrase set refers to unknown example `{0}`")]
    DanglingExample(String),

    #[error("more than one paraphrase set for example `{0}`")]
    DuplicateParaphraseSet(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),
}

impl CorpusError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CorpusError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the filesystem rather than of the data.
    pub fn is_io(&self) -> bool {
        matches!(self, CorpusError::Io { .. })
    }
}

/// Errors raised by metric computations on malformed inputs.
#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("input lists differ in length: {0}")]
    LengthMismatch(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("outline phrase {0} is empty")]
    EmptyPhrase(usize),

    #[error("order needs at least 2 phrases, got {0}")]
    TooFewPhrases(usize),

    #[error("n-gram order must be 1 or 2, got {0}")]
    UnsupportedOrder(usize),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),
}
