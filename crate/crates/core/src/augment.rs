//! Paraphrase-augmented training corpus.
//!
//! Each outline contributes its original story plus up to six accepted
//! paraphrases, all paired with the same source text.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{
    paraphrase_story_id, Origin, OutlineExample, ParaphraseCandidates, ParaphraseSet, ParsedStory, TrainingRecord,
};
use crate::error::CorpusError;
use crate::tagger::Tagger;

/// Acceptance rules for paraphrase candidates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterPolicy {
    pub min_length_ratio: f64,
    pub max_length_ratio: f64,
    pub max_accepted: usize,
    pub reject_exact_duplicates: bool,
}

impl Default for FilterPolicy {
    fn default() -> Self {
        FilterPolicy {
            min_length_ratio: 0.5,
            max_length_ratio: 2.0,
            max_accepted: 6,
            reject_exact_duplicates: true,
        }
    }
}

impl FilterPolicy {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let ok = self.min_length_ratio > 0.0
            && self.min_length_ratio <= 1.0
            && self.max_length_ratio >= 1.0
            && self.max_length_ratio.is_finite()
            && self.max_accepted >= 1;
        if ok {
            Ok(())
        } else {
            Err(CorpusError::InvalidValue(format!("invalid filter policy {self:?}")))
        }
    }
}

/// Greedily accepts candidates in order: a candidate is taken if its length
/// is within the policy's ratio bounds of the original and (when dedup is on)
/// it differs from the original and from everything accepted so far.
pub fn filter_paraphrases(example: &OutlineExample, candidates: &[String], policy: &FilterPolicy) -> ParaphraseSet {
    let original_len = example.story.chars().count() as f64;
    let lo = policy.min_length_ratio * original_len;
    let hi = policy.max_length_ratio * original_len;
    let mut accepted: Vec<String> = Vec::new();
    for cand in candidates {
        if accepted.len() == policy.max_accepted {
            break;
        }
        let len = cand.chars().count() as f64;
        if len < lo || len > hi {
            continue;
        }
        if policy.reject_exact_duplicates && (*cand == example.story || accepted.contains(cand)) {
            continue;
        }
        accepted.push(cand.clone());
    }
    ParaphraseSet {
        example_id: example.id.clone(),
        candidates: candidates.to_vec(),
        accepted,
    }
}

/// Filters every candidate record against its example. Examples without a
/// record get an empty set.
pub fn filter_all(
    examples: &[OutlineExample],
    candidates: &[ParaphraseCandidates],
    policy: &FilterPolicy,
) -> Result<Vec<ParaphraseSet>, CorpusError> {
    policy.validate()?;
    let by_id: HashMap<&str, &OutlineExample> = examples.iter().map(|e| (e.id.as_str(), e)).collect();
    let mut seen = HashSet::new();
    let mut sets = Vec::with_capacity(candidates.len());
    for rec in candidates {
        let example = by_id
            .get(rec.example_id.as_str())
            .ok_or_else(|| CorpusError::DanglingExample(rec.example_id.clone()))?;
        if !seen.insert(rec.example_id.as_str()) {
            return Err(CorpusError::DuplicateParaphraseSet(rec.example_id.clone()));
        }
        sets.push(filter_paraphrases(example, &rec.candidates, policy));
    }
    Ok(sets)
}

/// How the model input is assembled from an example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SourceRule {
    /// Token placed between outline phrases.
    pub separator: String,
    pub title_prefix: bool,
    /// Token placed between the title and the outline.
    pub title_separator: String,
}

impl Default for SourceRule {
    fn default() -> Self {
        SourceRule {
            separator: "#".into(),
            title_prefix: true,
            title_separator: ":".into(),
        }
    }
}

impl SourceRule {
    pub fn assemble(&self, example: &OutlineExample) -> String {
        let outline = example.phrases.join(&self.separator);
        if self.title_prefix {
            format!("{}{}{}", example.title, self.title_separator, outline)
        } else {
            outline
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentedPair {
    /// `example_id` for the original, `example_id#pK` for the K-th paraphrase.
    pub id: String,
    pub example_id: String,
    pub source: String,
    pub target: String,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceRecord {
    pub example_id: String,
    pub candidates: usize,
    pub accepted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AugmentedCorpus {
    pub pairs: Vec<AugmentedPair>,
    pub report: Vec<AcceptanceRecord>,
}

impl AugmentedCorpus {
    pub fn to_training_records(&self) -> Vec<TrainingRecord> {
        self.pairs
            .iter()
            .map(|p| TrainingRecord {
                id: Some(p.id.clone()),
                src: p.source.clone(),
                tgt: p.target.clone(),
                origin: Some(p.origin),
            })
            .collect()
    }

    /// Replaces each target with its tagged form. `parses` must hold a parse
    /// for every pair id whose text matches the pair's target.
    pub fn tag_targets(&mut self, parses: &[ParsedStory], tagger: &Tagger) -> Result<(), CorpusError> {
        let by_id: HashMap<&str, &ParsedStory> = parses.iter().map(|p| (p.example_id.as_str(), p)).collect();
        for pair in &mut self.pairs {
            let parse = by_id
                .get(pair.id.as_str())
                .ok_or_else(|| CorpusError::MissingParse(pair.id.clone()))?;
            parse.check_reconstruction(&pair.target)?;
            pair.target = tagger.tag_story(parse).text;
        }
        Ok(())
    }
}

/// Assembles the training corpus: for each example in order, its original
/// story followed by its accepted paraphrases.
pub fn build_augmented_corpus(
    examples: &[OutlineExample],
    paraphrases: &[ParaphraseSet],
    source_rule: &SourceRule,
) -> Result<AugmentedCorpus, CorpusError> {
    let ids: HashSet<&str> = examples.iter().map(|e| e.id.as_str()).collect();
    let mut by_id: HashMap<&str, &ParaphraseSet> = HashMap::new();
    for set in paraphrases {
        if !ids.contains(set.example_id.as_str()) {
            return Err(CorpusError::DanglingExample(set.example_id.clone()));
        }
        if by_id.insert(set.example_id.as_str(), set).is_some() {
            return Err(CorpusError::DuplicateParaphraseSet(set.example_id.clone()));
        }
    }

    let mut corpus = AugmentedCorpus::default();
    for example in examples {
        let source = source_rule.assemble(example);
        corpus.pairs.push(AugmentedPair {
            id: example.id.clone(),
            example_id: example.id.clone(),
            source: source.clone(),
            target: example.story.clone(),
            origin: Origin::Original,
        });
        let set = by_id.get(example.id.as_str());
        let accepted = set.map_or(&[][..], |s| &s.accepted[..]);
        for (k, text) in accepted.iter().enumerate() {
            corpus.pairs.push(AugmentedPair {
                id: paraphrase_story_id(&example.id, k + 1),
                example_id: example.id.clone(),
                source: source.clone(),
                target: text.clone(),
                origin: Origin::Paraphrase,
            });
        }
        corpus.report.push(AcceptanceRecord {
            example_id: example.id.clone(),
            candidates: set.map_or(0, |s| s.candidates.len()),
            accepted: accepted.len(),
        });
    }
    Ok(corpus)
}
