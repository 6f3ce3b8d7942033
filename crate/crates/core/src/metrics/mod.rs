//! The OutGen automatic evaluation suite: BLEU-1/2, Distinct-1/2, coverage,
//! order, and their weighted overall score. All statistics are computed over
//! characters.

pub mod lcs;
pub mod ngram;
pub mod order;

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::MetricError;
use crate::tagger::{strip_tags, TargetRelationSet};

pub use lcs::{coverage, lcs_chars, lcs_len};
pub use ngram::{bleu_from_stats, bleu_n, char_ngrams, distinct_n, BleuStats, Distinct};
pub use order::{anchor_all, anchor_phrase, order_from_positions, order_score, OrderOutcome, PhraseAnchor};

/// Column order shared by scores, weights and the printed table.
pub const COLUMNS: [&str; 6] = ["B-1", "B-2", "D-1", "D-2", "cover", "order"];

/// The six component scores, each a percentage.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricScores {
    pub b1: f64,
    pub b2: f64,
    pub d1: f64,
    pub d2: f64,
    pub cover: f64,
    pub order: f64,
}

impl MetricScores {
    pub fn to_array(self) -> [f64; 6] {
        [self.b1, self.b2, self.d1, self.d2, self.cover, self.order]
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        MetricScores {
            b1: v[0],
            b2: v[1],
            d1: v[2],
            d2: v[3],
            cover: v[4],
            order: v[5],
        }
    }
}

/// Per-metric weights of the overall score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricWeights {
    pub b1: f64,
    pub b2: f64,
    pub d1: f64,
    pub d2: f64,
    pub cover: f64,
    pub order: f64,
}

impl MetricWeights {
    /// Published weights for the LOT OutGen validation set.
    pub const LOT_VAL: MetricWeights = MetricWeights {
        b1: 0.190,
        b2: 0.405,
        d1: 0.119,
        d2: 0.095,
        cover: 0.095,
        order: 0.095,
    };

    /// Published weights for the LOT OutGen test set.
    pub const LOT_TEST: MetricWeights = MetricWeights {
        b1: 0.195,
        b2: 0.390,
        d1: 0.122,
        d2: 0.098,
        cover: 0.098,
        order: 0.098,
    };

    pub fn to_array(self) -> [f64; 6] {
        [self.b1, self.b2, self.d1, self.d2, self.cover, self.order]
    }

    pub fn from_array(v: [f64; 6]) -> Result<Self, MetricError> {
        let w = MetricWeights {
            b1: v[0],
            b2: v[1],
            d1: v[2],
            d2: v[3],
            cover: v[4],
            order: v[5],
        };
        w.validate()?;
        Ok(w)
    }

    /// Weights must be non-negative and sum to 1 within ±0.01 (the published
    /// vectors sum to 0.999 and 1.000).
    pub fn validate(&self) -> Result<(), MetricError> {
        let v = self.to_array();
        if v.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(MetricError::InvalidWeights(format!(
                "negative or non-finite weight in {v:?}"
            )));
        }
        let sum: f64 = v.iter().sum();
        if !(0.99..=1.01).contains(&sum) {
            return Err(MetricError::InvalidWeights(format!("weights sum to {sum:.4}")));
        }
        Ok(())
    }
}

impl FromStr for MetricWeights {
    type Err = MetricError;

    /// Accepts `lot-val`, `lot-test`, or six comma-separated numbers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lot-val" => Ok(Self::LOT_VAL),
            "lot-test" => Ok(Self::LOT_TEST),
            other => {
                let parts: Vec<f64> = other
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| MetricError::InvalidWeights(format!("unknown preset `{other}`")))?;
                let arr: [f64; 6] = parts
                    .try_into()
                    .map_err(|_| MetricError::InvalidWeights("expected 6 weights".into()))?;
                Self::from_array(arr)
            }
        }
    }
}

/// Weighted sum of the six scores.
pub fn overall(scores: &MetricScores, weights: &MetricWeights) -> f64 {
    scores
        .to_array()
        .iter()
        .zip(weights.to_array())
        .map(|(s, w)| s * w)
        .sum()
}

/// Per-example statistics kept in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleScores {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub id: Option<String>,
    pub cover: f64,
    pub order: f64,
    pub order_pairs: usize,
    pub order_flagged: bool,
    pub bleu: BleuStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(flatten)]
    pub scores: MetricScores,
    pub overall: f64,
    pub weights: MetricWeights,
    pub d1_degenerate: bool,
    pub d2_degenerate: bool,
    pub per_example: Vec<ExampleScores>,
}

impl MetricReport {
    /// Plain-text table: B-1, B-2, D-1, D-2, cover, order, Overall.
    pub fn table(&self, label: &str) -> String {
        format_table(label, &self.scores, self.overall)
    }
}

pub fn format_table(label: &str, scores: &MetricScores, overall: f64) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<12}", "");
    for c in COLUMNS.iter().chain(["Overall"].iter()) {
        let _ = write!(out, "{c:>9}");
    }
    out.push('\n');
    let _ = write!(out, "{label:<12}");
    for v in scores.to_array().iter().chain([overall].iter()) {
        let _ = write!(out, "{v:>9.2}");
    }
    out.push('\n');
    out
}

/// Sum of values after sorting, so the result does not depend on input order.
fn order_free_mean(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    values.into_iter().sum::<f64>() / n
}

/// Scores a corpus of generated stories. Generated texts have default tag
/// markers removed first.
pub fn evaluate_corpus(
    generated: &[&str],
    references: &[&str],
    outlines: &[Vec<&str>],
    weights: &MetricWeights,
) -> Result<MetricReport, MetricError> {
    evaluate_corpus_with(generated, references, outlines, weights, &TargetRelationSet::default())
}

pub fn evaluate_corpus_with(
    generated: &[&str],
    references: &[&str],
    outlines: &[Vec<&str>],
    weights: &MetricWeights,
    markers: &TargetRelationSet,
) -> Result<MetricReport, MetricError> {
    weights.validate()?;
    if generated.len() != references.len() || generated.len() != outlines.len() {
        return Err(MetricError::LengthMismatch(format!(
            "{} generated, {} references, {} outlines",
            generated.len(),
            references.len(),
            outlines.len()
        )));
    }
    if generated.is_empty() {
        return Err(MetricError::Empty("generated"));
    }
    let cleaned: Vec<String> = generated.iter().map(|g| strip_tags(g, markers)).collect();
    let cleaned: Vec<&str> = cleaned.iter().map(String::as_str).collect();

    let mut per_example = Vec::with_capacity(cleaned.len());
    for (i, ((gen, reference), phrases)) in cleaned.iter().zip(references).zip(outlines).enumerate() {
        let cover = coverage(gen, phrases)?;
        let order = order_score(gen, reference, phrases)?;
        per_example.push(ExampleScores {
            index: i,
            id: None,
            cover,
            order: order.score,
            order_pairs: order.pairs,
            order_flagged: order.flagged,
            bleu: BleuStats::compute(gen, reference, 2),
        });
    }

    let d1 = distinct_n(&cleaned, 1)?;
    let d2 = distinct_n(&cleaned, 2)?;
    let scores = MetricScores {
        b1: bleu_from_stats(per_example.iter().map(|e| &e.bleu), 1),
        b2: bleu_from_stats(per_example.iter().map(|e| &e.bleu), 2),
        d1: d1.score,
        d2: d2.score,
        cover: order_free_mean(per_example.iter().map(|e| e.cover).collect()),
        order: order_free_mean(per_example.iter().map(|e| e.order).collect()),
    };
    Ok(MetricReport {
        overall: overall(&scores, weights),
        scores,
        weights: *weights,
        d1_degenerate: d1.degenerate,
        d2_degenerate: d2.degenerate,
        per_example,
    })
}
