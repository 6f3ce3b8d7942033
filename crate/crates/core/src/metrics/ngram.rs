//! Character n-gram statistics: BLEU and Distinct.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::MetricError;

/// All contiguous character n-grams of `text`, with multiplicity.
pub fn char_ngrams(text: &str, n: usize) -> HashMap<&str, usize> {
    let mut grams = HashMap::new();
    for gram in ngram_slices(text, n) {
        *grams.entry(gram).or_insert(0) += 1;
    }
    grams
}

/// Iterator over the n-gram slices of `text` in order.
fn ngram_slices(text: &str, n: usize) -> impl Iterator<Item = &str> {
    let mut bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
    bounds.push(text.len());
    let count = if n == 0 {
        0
    } else {
        (bounds.len() - 1).saturating_sub(n - 1)
    };
    (0..count).map(move |i| &text[bounds[i]..bounds[i + n]])
}

fn check_order(n: usize) -> Result<(), MetricError> {
    if (1..=2).contains(&n) {
        Ok(())
    } else {
        Err(MetricError::UnsupportedOrder(n))
    }
}

/// Sufficient statistics for corpus BLEU of one candidate/reference pair.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BleuStats {
    /// Clipped n-gram matches for orders 1..=N.
    pub matches: Vec<u64>,
    /// Candidate n-gram counts for orders 1..=N.
    pub totals: Vec<u64>,
    pub candidate_len: u64,
    pub reference_len: u64,
}

impl BleuStats {
    pub fn compute(candidate: &str, reference: &str, max_n: usize) -> Self {
        let mut stats = BleuStats {
            matches: Vec::with_capacity(max_n),
            totals: Vec::with_capacity(max_n),
            candidate_len: candidate.chars().count() as u64,
            reference_len: reference.chars().count() as u64,
        };
        for n in 1..=max_n {
            let cand = char_ngrams(candidate, n);
            let refs = char_ngrams(reference, n);
            let matched: usize = cand
                .iter()
                .map(|(g, &c)| c.min(refs.get(g).copied().unwrap_or(0)))
                .sum();
            stats.matches.push(matched as u64);
            stats.totals.push(cand.values().sum::<usize>() as u64);
        }
        stats
    }

    fn add(&mut self, other: &BleuStats) {
        if self.matches.len() < other.matches.len() {
            self.matches.resize(other.matches.len(), 0);
            self.totals.resize(other.totals.len(), 0);
        }
        for (i, (&m, &t)) in other.matches.iter().zip(&other.totals).enumerate() {
            self.matches[i] += m;
            self.totals[i] += t;
        }
        self.candidate_len += other.candidate_len;
        self.reference_len += other.reference_len;
    }
}

/// Cumulative BLEU-n (percent) from corpus-summed statistics. Unsmoothed:
/// any zero precision gives 0.
pub fn bleu_from_stats<'a>(stats: impl IntoIterator<Item = &'a BleuStats>, n: usize) -> f64 {
    let mut total = BleuStats::default();
    for s in stats {
        total.add(s);
    }
    if total.matches.len() < n || total.candidate_len == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for k in 0..n {
        if total.matches[k] == 0 || total.totals[k] == 0 {
            return 0.0;
        }
        log_sum += (total.matches[k] as f64 / total.totals[k] as f64).ln();
    }
    let c = total.candidate_len as f64;
    let r = total.reference_len as f64;
    let bp = if c > r { 1.0 } else { (1.0 - r / c).exp() };
    100.0 * bp * (log_sum / n as f64).exp()
}

/// Corpus-level cumulative BLEU-n over characters, in percent.
pub fn bleu_n(candidates: &[&str], references: &[&str], n: usize) -> Result<f64, MetricError> {
    check_order(n)?;
    if candidates.len() != references.len() {
        return Err(MetricError::LengthMismatch(format!(
            "{} candidates, {} references",
            candidates.len(),
            references.len()
        )));
    }
    if candidates.is_empty() {
        return Err(MetricError::Empty("candidates"));
    }
    let stats: Vec<BleuStats> = candidates
        .iter()
        .zip(references)
        .map(|(c, r)| BleuStats::compute(c, r, n))
        .collect();
    Ok(bleu_from_stats(&stats, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distinct {
    pub score: f64,
    /// True when the corpus has no n-grams at all (score defined as 0).
    pub degenerate: bool,
}

/// Unique n-grams over total n-grams, pooled over the whole corpus, in percent.
pub fn distinct_n(texts: &[&str], n: usize) -> Result<Distinct, MetricError> {
    check_order(n)?;
    if texts.is_empty() {
        return Err(MetricError::Empty("texts"));
    }
    let mut unique = HashSet::new();
    let mut total = 0usize;
    for text in texts {
        for gram in ngram_slices(text, n) {
            unique.insert(gram);
            total += 1;
        }
    }
    if total == 0 {
        return Ok(Distinct {
            score: 0.0,
            degenerate: true,
        });
    }
    Ok(Distinct {
        score: 100.0 * unique.len() as f64 / total as f64,
        degenerate: false,
    })
}
