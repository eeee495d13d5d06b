//! Interactional-marker lexicon and phrase matching.
//!
//! Five categories of metadiscourse markers are tracked: hedges, boosters,
//! attitude markers, self-mentions, and engagement markers. A phrase is a
//! sequence of one or more lowercase word tokens; it matches a sentence iff
//! the sequence occurs contiguously in the sentence's token stream. Counts
//! sum matched occurrences over all of a category's phrases, and overlapping
//! occurrences each count.
//!
//! The shipped starter lexicon contains only example phrases; real studies
//! should load a full phrase list with [`MarkerLexicon::from_json`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five marker categories, in the order used by every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerCategory {
    Hedges,
    Boosters,
    Attitude,
    SelfMention,
    Engagement,
}

impl MarkerCategory {
    pub const ALL: [MarkerCategory; 5] = [
        MarkerCategory::Hedges,
        MarkerCategory::Boosters,
        MarkerCategory::Attitude,
        MarkerCategory::SelfMention,
        MarkerCategory::Engagement,
    ];

    pub fn key(self) -> &'static str {
        match self {
            MarkerCategory::Hedges => "hedges",
            MarkerCategory::Boosters => "boosters",
            MarkerCategory::Attitude => "attitude",
            MarkerCategory::SelfMention => "self_mention",
            MarkerCategory::Engagement => "engagement",
        }
    }
}

impl fmt::Display for MarkerCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("category {0} contains an empty phrase")]
    EmptyPhrase(MarkerCategory),
}

/// Phrase lists per category. Phrases are stored as token sequences;
/// categories may share vocabulary.
#[derive(Debug, Clone)]
pub struct MarkerLexicon {
    phrases: BTreeMap<MarkerCategory, Vec<Vec<String>>>,
}

#[derive(Deserialize)]
struct LexiconFile {
    #[serde(default)]
    hedges: Vec<String>,
    #[serde(default)]
    boosters: Vec<String>,
    #[serde(default)]
    attitude: Vec<String>,
    #[serde(default)]
    self_mention: Vec<String>,
    #[serde(default)]
    engagement: Vec<String>,
}

const STARTER_LEXICON: &str = include_str!("../data/lexicon_default.json");

impl MarkerLexicon {
    /// Parse a lexicon from its JSON form: an object with one array of
    /// phrase strings per category; multiword phrases are space-separated.
    pub fn from_json(json: &str) -> Result<Self, LexiconError> {
        let file: LexiconFile = serde_json::from_str(json)?;
        let mut phrases = BTreeMap::new();
        for (cat, list) in [
            (MarkerCategory::Hedges, file.hedges),
            (MarkerCategory::Boosters, file.boosters),
            (MarkerCategory::Attitude, file.attitude),
            (MarkerCategory::SelfMention, file.self_mention),
            (MarkerCategory::Engagement, file.engagement),
        ] {
            let mut parsed = Vec::with_capacity(list.len());
            for phrase in list {
                let toks: Vec<String> = phrase
                    .split_whitespace()
                    .map(|w| w.to_lowercase())
                    .collect();
                if toks.is_empty() {
                    return Err(LexiconError::EmptyPhrase(cat));
                }
                parsed.push(toks);
            }
            phrases.insert(cat, parsed);
        }
        Ok(MarkerLexicon { phrases })
    }

    /// The starter lexicon shipped with the crate. It seeds each category
    /// with a handful of canonical examples and exists so the pipeline runs
    /// out of the box; pass a full phrase list for real analyses.
    pub fn starter() -> Self {
        MarkerLexicon::from_json(STARTER_LEXICON).expect("embedded starter lexicon is valid")
    }

    pub fn phrases(&self, cat: MarkerCategory) -> &[Vec<String>] {
        self.phrases.get(&cat).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Per-sentence marker outcome: whether each category matched at all, and how
/// many occurrences it matched.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerHits {
    pub hit: BTreeMap<MarkerCategory, bool>,
    pub count: BTreeMap<MarkerCategory, u32>,
}

impl MarkerHits {
    pub fn is_hit(&self, cat: MarkerCategory) -> bool {
        self.hit.get(&cat).copied().unwrap_or(false)
    }
}

fn occurrences(tokens: &[String], phrase: &[String]) -> u32 {
    if phrase.is_empty() || phrase.len() > tokens.len() {
        return 0;
    }
    tokens
        .windows(phrase.len())
        .filter(|w| w.iter().zip(phrase).all(|(a, b)| a == b))
        .count() as u32
}

/// Match every phrase of every category against a sentence's lowercase word
/// tokens.
pub fn match_markers(tokens: &[String], lexicon: &MarkerLexicon) -> MarkerHits {
    let mut hits = MarkerHits::default();
    for cat in MarkerCategory::ALL {
        let total: u32 = lexicon
            .phrases(cat)
            .iter()
            .map(|p| occurrences(tokens, p))
            .sum();
        hits.count.insert(cat, total);
        hits.hit.insert(cat, total > 0);
    }
    hits
}
