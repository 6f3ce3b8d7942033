//! Longest common subsequence over characters, and outline coverage.

use std::collections::HashMap;

use crate::error::MetricError;

/// Length of a longest common subsequence of the character sequences of `a`
/// and `b`.
pub fn lcs_len(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    lcs_chars(&a, &b)
}

/// Bit-parallel LCS (Hyyrö's formulation of Allison–Dix) over `char` slices.
pub fn lcs_chars(a: &[char], b: &[char]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    Pattern::new(short).lcs(long)
}

/// Per-character match bitmasks of a fixed pattern, reusable against many texts.
pub(crate) struct Pattern {
    len: usize,
    masks: HashMap<char, Vec<u64>>,
}

impl Pattern {
    pub(crate) fn new(pattern: &[char]) -> Self {
        let words = pattern.len().div_ceil(64);
        let mut masks: HashMap<char, Vec<u64>> = HashMap::new();
        for (i, &c) in pattern.iter().enumerate() {
            masks.entry(c).or_insert_with(|| vec![0; words])[i / 64] |= 1 << (i % 64);
        }
        Pattern {
            len: pattern.len(),
            masks,
        }
    }

    pub(crate) fn lcs(&self, text: &[char]) -> usize {
        if self.len == 0 {
            return 0;
        }
        let words = self.len.div_ceil(64);
        let mut row = vec![u64::MAX; words];
        for c in text {
            let Some(mask) = self.masks.get(c) else { continue };
            let mut carry = false;
            for (v, &m) in row.iter_mut().zip(mask) {
                let u = *v & m;
                let (s1, c1) = v.overflowing_add(u);
                let (s2, c2) = s1.overflowing_add(carry as u64);
                carry = c1 || c2;
                // u is a subset of v, so v - u never borrows
                *v = s2 | (*v - u);
            }
        }

        let mut zeros = 0;
        for (w, v) in row.iter().enumerate() {
            let bits = (self.len - w * 64).min(64);
            let live = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
            zeros += (!v & live).count_ones() as usize;
        }
        zeros
    }
}

/// Mean ROUGE-L recall of the outline phrases against `story`, in percent.
pub fn coverage(story: &str, phrases: &[&str]) -> Result<f64, MetricError> {
    if phrases.is_empty() {
        return Err(MetricError::Empty("phrases"));
    }
    let story: Vec<char> = story.chars().collect();
    let mut sum = 0.0;
    for (i, phrase) in phrases.iter().enumerate() {
        let p: Vec<char> = phrase.chars().collect();
        if p.is_empty() {
            return Err(MetricError::EmptyPhrase(i));
        }
        sum += Pattern::new(&p).lcs(&story) as f64 / p.len() as f64;
    }
    Ok(100.0 * sum / phrases.len() as f64)
}
