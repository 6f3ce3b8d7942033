use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use outgen::augment::{FilterPolicy, SourceRule};
use outgen::metrics::MetricWeights;
use outgen::tagger::{default_aliases, Tagger, TargetRelationSet};
use serde::Deserialize;

use crate::error::CliError;

/// Metric weights as written in a config file: a preset name or six numbers.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum WeightSetting {
    Preset(String),
    Explicit(Vec<f64>),
}

impl WeightSetting {
    pub fn resolve(&self) -> Result<MetricWeights, CliError> {
        match self {
            WeightSetting::Preset(name) => Ok(name.parse()?),
            WeightSetting::Explicit(v) => {
                let arr: [f64; 6] = v
                    .as_slice()
                    .try_into()
                    .map_err(|_| CliError::Validation(format!("weights need 6 values, got {}", v.len())))?;
                Ok(MetricWeights::from_array(arr)?)
            }
        }
    }
}

/// Everything a pipeline run needs. Loaded from TOML; command-line flags
/// override individual fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub examples: Option<PathBuf>,
    pub parses: Option<PathBuf>,
    pub paraphrases: Option<PathBuf>,
    pub generated: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub split: Option<String>,
    pub targets: TargetRelationSet,
    pub aliases: BTreeMap<String, String>,
    pub filter: FilterPolicy,
    pub weights: WeightSetting,
    pub source_rule: SourceRule,
    pub max_units: usize,
    pub strict: bool,
    /// Reserved: nothing in the pipeline is randomized.
    pub random_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            examples: None,
            parses: None,
            paraphrases: None,
            generated: None,
            output: None,
            report: None,
            split: None,
            targets: TargetRelationSet::default(),
            aliases: default_aliases(),
            filter: FilterPolicy::default(),
            weights: WeightSetting::Preset("lot-val".into()),
            source_rule: SourceRule::default(),
            max_units: 512,
            strict: true,
            random_seed: 0,
        }
    }
}

impl PipelineConfig {
    /// Reads a config file. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: PipelineConfig = toml::from_str(&text)
            .map_err(|e| CliError::Validation(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.examples,
            &mut cfg.parses,
            &mut cfg.paraphrases,
            &mut cfg.generated,
            &mut cfg.output,
            &mut cfg.report,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn tagger(&self) -> Tagger {
        Tagger {
            targets: self.targets.clone(),
            aliases: self.aliases.clone(),
        }
    }

    pub fn metric_weights(&self) -> Result<MetricWeights, CliError> {
        self.weights.resolve()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.filter.validate()?;
        self.metric_weights()?;
        if self.max_units == 0 {
            return Err(CliError::Validation("max_units must be positive".into()));
        }
        Ok(())
    }
}
