//! Analysis configuration: a JSON file whose keys mirror the CLI flags, with
//! every flag overriding the corresponding key.

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("config is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Everything an analysis run needs. Paths left unset fall back to the
/// defaults embedded in the crate (registry, lexicon, tagger model).
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub corpus: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub tagger_model: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub suppression_min: u64,
    pub verb_min_count: u64,
    pub emit_citances: Option<PathBuf>,
    pub stopverbs: Vec<String>,
    pub version_include_list: Vec<String>,
    pub method_include_terms: Option<Vec<String>>,
    pub method_exclude_terms: Option<Vec<String>>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            corpus: None,
            registry: None,
            lexicon: None,
            tagger_model: None,
            out: None,
            workers: 0, // 0 = all available cores
            suppression_min: 10,
            verb_min_count: 10,
            stopverbs: vec!["be".to_string(), "have".to_string()],
            version_include_list: vec![
                "V3-TR".to_string(),
                "V4".to_string(),
                "V4-TR".to_string(),
                "V5".to_string(),
            ],
            emit_citances: None,
            method_include_terms: None,
            method_exclude_terms: None,
        }
    }
}

impl AnalysisConfig {
    pub fn from_json(json: &str) -> Result<Self, ConfigError> {
        let config: AnalysisConfig = serde_json::from_str(json)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let content =
            std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
        AnalysisConfig::from_json(&content)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.suppression_min < 1 {
            return Err(ConfigError::Invalid("suppression_min must be >= 1".into()));
        }
        if self.verb_min_count < 1 {
            return Err(ConfigError::Invalid("verb_min_count must be >= 1".into()));
        }
        for p in [&self.corpus, &self.out].into_iter().flatten() {
            if p.as_os_str().is_empty() {
                return Err(ConfigError::Invalid("paths must be non-empty".into()));
            }
        }
        Ok(())
    }
}
