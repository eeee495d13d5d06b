//! Normalized reference keys and the versioned-instrument registry.
//!
//! A reference key is `contributor_year_titleprefix` where the contributor is
//! lowercased, stripped of non-alphanumerics, and truncated to 25 characters,
//! and the title prefix is the first 3 characters of the same normalization
//! applied to the title. A key matches a registry version iff the contributor
//! equals the registry author, the title prefix is one of the accepted
//! prefixes, and the year equals that version's publication year. Keys whose
//! year matches no version resolve to nothing; plausible mis-dated
//! references are deliberately dropped rather than guessed at.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ReferenceEntry;

pub const CONTRIBUTOR_KEY_LEN: usize = 25;
pub const TITLE_PREFIX_LEN: usize = 3;

/// Opaque version label drawn from the registry, e.g. "V4-TR".
pub type VersionId = String;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{0} normalizes to an empty string")]
    EmptyAfterNormalization(&'static str),
    #[error("registry years are ambiguous: {0} appears twice")]
    AmbiguousRegistry(i32),
    #[error("unknown version `{0}`")]
    UnknownVersion(String),
    #[error("registry is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
}

/// A normalized reference key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReferenceKey {
    pub contributor_norm: String,
    pub year: i32,
    pub title_prefix: String,
}

impl ReferenceKey {
    /// Rendered `contributor_year_prefix` form.
    pub fn render(&self) -> String {
        format!(
            "{}_{}_{}",
            self.contributor_norm, self.year, self.title_prefix
        )
    }
}

/// Lowercase and strip everything that is not a letter or digit.
fn normalize(text: &str) -> String {
    text.chars()
        .flat_map(|c| c.to_lowercase())
        .filter(|c| c.is_alphanumeric())
        .collect()
}

fn truncate_chars(s: &str, n: usize) -> String {
    s.chars().take(n).collect()
}

/// Build the normalized key for one reference entry.
pub fn build_reference_key(entry: &ReferenceEntry) -> Result<ReferenceKey, RegistryError> {
    let contributor = normalize(&entry.lead_contributor);
    if contributor.is_empty() {
        return Err(RegistryError::EmptyAfterNormalization("contributor"));
    }
    let title = normalize(&entry.title);
    if title.is_empty() {
        return Err(RegistryError::EmptyAfterNormalization("title"));
    }
    Ok(ReferenceKey {
        contributor_norm: truncate_chars(&contributor, CONTRIBUTOR_KEY_LEN),
        year: entry.year,
        title_prefix: truncate_chars(&title, TITLE_PREFIX_LEN),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionEntry {
    pub id: VersionId,
    pub label: String,
    pub year: i32,
}

#[derive(Debug, Clone, Deserialize)]
struct RegistryFile {
    author_norm: String,
    title_prefixes: Vec<String>,
    versions: Vec<VersionEntry>,
}

/// The cited instrument's editions with publication years and title-prefix
/// match rules. Publication years must be unique or matching is ambiguous.
#[derive(Debug, Clone)]
pub struct VersionRegistry {
    pub author_norm: String,
    pub title_prefixes: Vec<String>,
    pub entries: Vec<VersionEntry>,
}

const DEFAULT_REGISTRY: &str = include_str!("../data/registry_default.json");

impl VersionRegistry {
    pub fn from_json(json: &str) -> Result<Self, RegistryError> {
        let file: RegistryFile = serde_json::from_str(json)?;
        let registry = VersionRegistry {
            author_norm: normalize(&file.author_norm),
            title_prefixes: file
                .title_prefixes
                .iter()
                .map(|p| truncate_chars(&normalize(p), TITLE_PREFIX_LEN))
                .collect(),
            entries: file.versions,
        };
        for (i, e) in registry.entries.iter().enumerate() {
            if registry.entries[..i].iter().any(|p| p.year == e.year) {
                return Err(RegistryError::AmbiguousRegistry(e.year));
            }
        }
        Ok(registry)
    }

    /// The registry shipped with the crate: the seven major DSM editions.
    pub fn dsm_default() -> Self {
        VersionRegistry::from_json(DEFAULT_REGISTRY).expect("embedded registry is valid")
    }

    pub fn entry(&self, id: &str) -> Option<&VersionEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn publication_year(&self, id: &str) -> Result<i32, RegistryError> {
        self.entry(id)
            .map(|e| e.year)
            .ok_or_else(|| RegistryError::UnknownVersion(id.to_string()))
    }
}

/// Match a key against the registry. Returns the version whose publication
/// year equals the key's year, provided contributor and title prefix agree.
pub fn match_version(key: &ReferenceKey, registry: &VersionRegistry) -> Option<VersionId> {
    if key.contributor_norm != registry.author_norm {
        return None;
    }
    if !registry
        .title_prefixes
        .iter()
        .any(|p| p == &key.title_prefix)
    {
        return None;
    }
    registry
        .entries
        .iter()
        .find(|e| e.year == key.year)
        .map(|e| e.id.clone())
}

/// Years elapsed between a version's publication and the citing paper's
/// publication. Negative values are possible (pre-prints, mis-dated records)
/// and are flagged downstream rather than rejected here.
pub fn object_history(
    version: &str,
    citing_year: i32,
    registry: &VersionRegistry,
) -> Result<i32, RegistryError> {
    Ok(citing_year - registry.publication_year(version)?)
}
