//! Corpus tooling and evaluation for outline-conditioned Chinese story
//! generation (the LOT OutGen task).
//!
//! * [`corpus`]: domain types and interchange formats (JSONL, CoNLL-U).
//! * [`tagger`]: inline dependency-role markers and their removal.
//! * [`augment`]: paraphrase filtering and augmented training pairs.
//! * [`metrics`]: BLEU, Distinct, coverage, order and the overall score.
//! * [`stats`]: dataset statistics.

pub mod augment;
pub mod corpus;
pub mod error;
pub mod metrics;
pub mod stats;
pub mod tagger;

pub use error::{CorpusError, MetricError};
