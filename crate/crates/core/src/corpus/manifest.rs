//! Provenance record written by the external parse/paraphrase adapters next
//! to each interchange file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdapterManifest {
    pub tool: ToolInfo,
    /// Invocation parameters, as the adapter recorded them.
    #[serde(default)]
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub input: PathBuf,
    pub output: PathBuf,
    /// Story blocks for a parse file, records for a paraphrase file.
    pub record_count: usize,
}

impl AdapterManifest {
    pub fn check_count(&self, observed: usize) -> Result<(), CorpusError> {
        if observed == self.record_count {
            Ok(())
        } else {
            Err(CorpusError::InvalidValue(format!(
                "manifest for {} records {} entries but {observed} were loaded",
                self.output.display(),
                self.record_count
            )))
        }
    }
}

/// Where the manifest for `data` lives: `<data>.manifest.json`.
pub fn manifest_path(data: &Path) -> PathBuf {
    let mut name = data.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    data.with_file_name(name)
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<AdapterManifest, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CorpusError::Malformed {
        line: e.line(),
        message: format!("{}: {e}", path.display()),
    })
}

pub fn write_manifest(path: impl AsRef<Path>, manifest: &AdapterManifest) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(manifest).map_err(|e| CorpusError::io(path, e.into()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CorpusError::io(path, e))
}
