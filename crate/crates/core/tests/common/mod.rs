//! Slow, obviously-correct reference implementations used to check the
//! library. None of these call into the code paths they check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use outgen::corpus::{DependencyArc, Head, ParsedSentence, ParsedStory, WordSegment};
use rand::seq::SliceRandom;
use rand::Rng;

/// Classic quadratic LCS table.
pub fn dp_lcs(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            t[i][j] = if a[i - 1] == b[j - 1] {
                t[i - 1][j - 1] + 1
            } else {
                t[i - 1][j].max(t[i][j - 1])
            };
        }
    }
    t[a.len()][b.len()]
}

fn windows(text: &str, n: usize) -> Vec<Vec<char>> {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() < n {
        return Vec::new();
    }
    chars.windows(n).map(|w| w.to_vec()).collect()
}

/// Set-and-count Distinct-n.
pub fn naive_distinct(texts: &[&str], n: usize) -> f64 {
    let all: Vec<Vec<char>> = texts.iter().flat_map(|t| windows(t, n)).collect();
    if all.is_empty() {
        return 0.0;
    }
    let set: BTreeSet<&Vec<char>> = all.iter().collect();
    100.0 * set.len() as f64 / all.len() as f64
}

/// Corpus BLEU written out longhand: clipped counts, corpus sums, geometric
/// mean and brevity penalty.
pub fn naive_bleu(cands: &[&str], refs: &[&str], n: usize) -> f64 {
    let mut clipped = vec![0usize; n];
    let mut totals = vec![0usize; n];
    let mut c_len = 0usize;
    let mut r_len = 0usize;
    for (c, r) in cands.iter().zip(refs) {
        c_len += c.chars().count();
        r_len += r.chars().count();
        for k in 1..=n {
            let mut rc: BTreeMap<Vec<char>, usize> = BTreeMap::new();
            for w in windows(r, k) {
                *rc.entry(w).or_default() += 1;
            }
            let cw = windows(c, k);
            totals[k - 1] += cw.len();
            for w in cw {
                if let Some(left) = rc.get_mut(&w) {
                    if *left > 0 {
                        *left -= 1;
                        clipped[k - 1] += 1;
                    }
                }
            }
        }
    }
    if c_len == 0 {
        return 0.0;
    }
    let mut prod = 1.0f64;
    for k in 0..n {
        if clipped[k] == 0 {
            return 0.0;
        }
        prod *= clipped[k] as f64 / totals[k] as f64;
    }
    let geo = prod.powf(1.0 / n as f64);
    let bp = if c_len > r_len {
        1.0
    } else {
        (1.0 - r_len as f64 / c_len as f64).exp()
    };
    100.0 * bp * geo
}

/// Leftmost window of the phrase's length with the largest DP LCS.
pub fn window_anchor(story: &str, phrase: &str) -> (Option<usize>, f64) {
    let s: Vec<char> = story.chars().collect();
    let l = phrase.chars().count();
    if s.is_empty() {
        return (None, 0.0);
    }
    let starts = if s.len() >= l { s.len() - l + 1 } else { 1 };
    let mut best = (0usize, 0usize);
    for start in 0..starts {
        let end = (start + l).min(s.len());
        let w: String = s[start..end].iter().collect();
        let v = dp_lcs(phrase, &w);
        if v > best.0 {
            best = (v, start);
        }
    }
    if best.0 == 0 {
        (None, 0.0)
    } else {
        (Some(best.1), best.0 as f64 / l as f64)
    }
}

/// Pairwise inversion ratio over phrases present in both position lists.
pub fn pairwise_order(gen: &[Option<usize>], reference: &[Option<usize>]) -> Option<f64> {
    let idx: Vec<usize> = (0..gen.len())
        .filter(|&i| gen[i].is_some() && reference[i].is_some())
        .collect();
    if idx.len() < 2 {
        return None;
    }
    let mut inv = 0.0;
    let mut pairs = 0.0;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            let (i, j) = (idx[a], idx[b]);
            let (gi, gj) = (gen[i].unwrap() as i64, gen[j].unwrap() as i64);
            let (ri, rj) = (reference[i].unwrap() as i64, reference[j].unwrap() as i64);
            pairs += 1.0;
            if gi == gj || ri == rj {
                inv += 0.5;
            } else if (gi - gj).signum() != (ri - rj).signum() {
                inv += 1.0;
            }
        }
    }
    Some(100.0 * (1.0 - inv / pairs))
}

/// Single left-to-right pass deleting `<label>` occurrences.
pub fn naive_strip(text: &str, labels: &[&str]) -> String {
    let markers: Vec<String> = labels.iter().map(|l| format!("<{l}>")).collect();
    let mut out = String::new();
    let mut rest = text;
    'outer: while !rest.is_empty() {
        for m in &markers {
            if let Some(r) = rest.strip_prefix(m.as_str()) {
                rest = r;
                continue 'outer;
            }
        }
        let c = rest.chars().next().unwrap();
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}

/// Mean per-phrase DP recall.
pub fn naive_coverage(story: &str, phrases: &[&str]) -> f64 {
    let sum: f64 = phrases
        .iter()
        .map(|p| dp_lcs(p, story) as f64 / p.chars().count() as f64)
        .sum();
    100.0 * sum / phrases.len() as f64
}

pub fn random_string<R: Rng>(rng: &mut R, alphabet: &[char], max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

pub const LABELS: [&str; 8] = ["nsubj", "root", "dobj", "pobj", "obj", "det", "aux", "punct"];

/// Random single-rooted tree over random segments. Segment texts are drawn
/// from an alphabet that includes marker syntax so escaping is exercised.
pub fn random_parse<R: Rng>(rng: &mut R, id: &str, max_sentences: usize, max_segments: usize) -> ParsedStory {
    const PIECES: [&str; 14] = [
        "他", "们", "游", "历", "国", "家", "。", "<", ">", "\\", "nsubj", "<root>", "<dobj>", "a",
    ];
    let n_sent = rng.gen_range(1..=max_sentences);
    let sentences = (0..n_sent)
        .map(|k| {
            let n = rng.gen_range(1..=max_segments);
            let segments: Vec<WordSegment> = (0..n)
                .map(|_| {
                    let parts = rng.gen_range(1..=3);
                    let text: String = (0..parts).map(|_| *PIECES.choose(rng).unwrap()).collect();
                    WordSegment::new(text).unwrap()
                })
                .collect();
            // attach nodes in a random order, each to an already attached one
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut heads = vec![Head::Root; n];
            for pos in 1..n {
                heads[order[pos]] = Head::Segment(order[rng.gen_range(0..pos)]);
            }
            let arcs = (0..n)
                .map(|i| DependencyArc {
                    dependent: i,
                    head: heads[i],
                    relation: match heads[i] {
                        Head::Root => "root".to_owned(),
                        Head::Segment(_) => {
                            let l = *LABELS.choose(rng).unwrap();
                            if l == "root" {
                                "nsubj".to_owned()
                            } else {
                                l.to_owned()
                            }
                        }
                    },
                })
                .collect();
            ParsedSentence::new(format!("{id}-{k}"), segments, arcs).unwrap()
        })
        .collect();
    ParsedStory {
        example_id: id.to_owned(),
        sentences,
    }
}
