//! Phrase anchoring and the order (positional inversion) score.

use serde::{Deserialize, Serialize};

use super::lcs::Pattern;
use crate::error::MetricError;

/// Where an outline phrase was located in a story.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhraseAnchor {
    pub phrase_index: usize,
    /// Character offset of the best-matching window; `None` when the phrase
    /// shares no character with the story.
    pub position: Option<usize>,
    pub match_recall: f64,
}

/// Best window for `phrase` in `story`: among all windows of the phrase's
/// length, the leftmost one maximizing the LCS with the phrase. A story
/// shorter than the phrase is a single window at offset 0.
pub(crate) fn anchor_chars(story: &[char], phrase: &[char]) -> (Option<usize>, f64) {
    let len = phrase.len();
    if len == 0 || story.is_empty() {
        return (None, 0.0);
    }
    let pattern = Pattern::new(phrase);
    let last_start = story.len().saturating_sub(len);
    let mut best = 0;
    let mut best_at = 0;
    for start in 0..=last_start {
        let end = (start + len).min(story.len());
        let l = pattern.lcs(&story[start..end]);
        if l > best {
            best = l;
            best_at = start;
            if best == len {
                break;
            }
        }
    }
    if best == 0 {
        (None, 0.0)
    } else {
        (Some(best_at), best as f64 / len as f64)
    }
}

pub fn anchor_phrase(story: &str, phrase: &str) -> PhraseAnchor {
    let story: Vec<char> = story.chars().collect();
    let phrase: Vec<char> = phrase.chars().collect();
    let (position, match_recall) = anchor_chars(&story, &phrase);
    PhraseAnchor {
        phrase_index: 0,
        position,
        match_recall,
    }
}

/// Anchors for every phrase in one story.
pub fn anchor_all(story: &str, phrases: &[&str]) -> Vec<PhraseAnchor> {
    let story: Vec<char> = story.chars().collect();
    phrases
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let p: Vec<char> = p.chars().collect();
            let (position, match_recall) = anchor_chars(&story, &p);
            PhraseAnchor {
                phrase_index: i,
                position,
                match_recall,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderOutcome {
    /// Percentage in [0, 100].
    pub score: f64,
    /// Phrase pairs anchored in both texts.
    pub pairs: usize,
    /// Inverted pairs; ties count one half.
    pub inversions: f64,
    /// Fewer than two phrases were anchored in both texts; score is 0.
    pub flagged: bool,
}

/// Compares phrase positions in a generated and a reference story. Only
/// phrases anchored in both take part.
pub fn order_from_positions(generated: &[Option<usize>], reference: &[Option<usize>]) -> OrderOutcome {
    let both: Vec<(usize, usize)> = generated
        .iter()
        .zip(reference)
        .filter_map(|(g, r)| Some(((*g)?, (*r)?)))
        .collect();
    if both.len() < 2 {
        return OrderOutcome {
            score: 0.0,
            pairs: 0,
            inversions: 0.0,
            flagged: true,
        };
    }
    let mut inversions = 0.0;
    let mut pairs = 0;
    for (i, &(gi, ri)) in both.iter().enumerate() {
        for &(gj, rj) in &both[i + 1..] {
            pairs += 1;
            let g = gi.cmp(&gj);
            let r = ri.cmp(&rj);
            if g.is_eq() || r.is_eq() {
                inversions += 0.5;
            } else if g != r {
                inversions += 1.0;
            }
        }
    }
    OrderOutcome {
        score: 100.0 * (1.0 - inversions / pairs as f64),
        pairs,
        inversions,
        flagged: false,
    }
}

pub fn order_score(generated: &str, reference: &str, phrases: &[&str]) -> Result<OrderOutcome, MetricError> {
    if phrases.len() < 2 {
        return Err(MetricError::TooFewPhrases(phrases.len()));
    }
    if let Some(i) = phrases.iter().position(|p| p.is_empty()) {
        return Err(MetricError::EmptyPhrase(i));
    }
    let g: Vec<Option<usize>> = anchor_all(generated, phrases).iter().map(|a| a.position).collect();
    let r: Vec<Option<usize>> = anchor_all(reference, phrases).iter().map(|a| a.position).collect();
    Ok(order_from_positions(&g, &r))
}
