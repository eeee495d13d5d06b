//! Citance extraction: mapping citation anchors to the sentences that contain
//! them and emitting one record per (sentence, cited version).
//!
//! An anchor contributes iff at least one of its references resolves against
//! the version registry; anchors that resolve to nothing are skipped and
//! tallied. Multiple anchors for the same version inside one sentence
//! collapse into a single citance, while one sentence citing two versions
//! yields two.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Document;
use crate::lexicon::MarkerHits;
use crate::registry::{build_reference_key, match_version, VersionId, VersionRegistry};
use crate::section::SectionKind;
use crate::segment::{segment_sentences, sentence_at, SentenceSpan};

/// Linguistic features of one citance. Extraction emits these empty; the
/// pipeline fills them in.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    #[serde(flatten)]
    pub markers: MarkerHits,
    pub flesch: f64,
    pub word_count: usize,
    pub syllable_count: usize,
    pub primary_verbs: Vec<String>,
}

/// One sentence citing one registry version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Citance {
    pub doc_id: String,
    pub section_id: String,
    pub paragraph_index: usize,
    pub text: String,
    pub char_start: usize,
    pub char_end: usize,
    pub version_id: VersionId,
    pub section_kind: SectionKind,
    pub citing_year: i32,
    pub object_history_years: i32,
    pub features: FeatureVector,
}

/// Anchors that produced no citance, by cause.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ExtractionStats {
    /// No reference of the anchor resolved to a registry version.
    pub skipped_anchors: u64,
    /// The anchor's offset did not fall inside any sentence, or its section
    /// or paragraph could not be addressed.
    pub unmapped_anchors: u64,
}

impl ExtractionStats {
    pub fn merge(&mut self, other: ExtractionStats) {
        self.skipped_anchors += other.skipped_anchors;
        self.unmapped_anchors += other.unmapped_anchors;
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CitanceError {
    #[error("citances from multiple documents: `{0}` and `{1}`")]
    MixedDocuments(String, String),
}

/// Extract every citance of a document. `kinds` must label every section
/// (the output of section classification).
pub fn extract_citances(
    doc: &Document,
    kinds: &HashMap<String, SectionKind>,
    registry: &VersionRegistry,
) -> (Vec<Citance>, ExtractionStats) {
    let mut stats = ExtractionStats::default();

    // resolve each reference once
    let resolved: HashMap<&str, Option<VersionId>> = doc
        .references
        .iter()
        .map(|r| {
            let version = build_reference_key(r)
                .ok()
                .and_then(|key| match_version(&key, registry));
            (r.ref_id.as_str(), version)
        })
        .collect();

    let section_pos: HashMap<&str, usize> = doc
        .sections
        .iter()
        .enumerate()
        .map(|(i, s)| (s.section_id.as_str(), i))
        .collect();

    // sentence spans computed lazily, once per addressed paragraph
    let mut spans: BTreeMap<(usize, usize), Vec<SentenceSpan>> = BTreeMap::new();
    let mut seen: HashSet<(usize, usize, usize, VersionId)> = HashSet::new();
    let mut out: Vec<Citance> = Vec::new();

    for anchor in &doc.anchors {
        let versions: Vec<VersionId> = {
            let mut vs: Vec<VersionId> = anchor
                .ref_ids
                .iter()
                .filter_map(|rid| resolved.get(rid.as_str()).cloned().flatten())
                .collect();
            vs.sort();
            vs.dedup();
            vs
        };
        if versions.is_empty() {
            stats.skipped_anchors += 1;
            continue;
        }

        let Some(&sec_idx) = section_pos.get(anchor.section_id.as_str()) else {
            stats.unmapped_anchors += 1;
            continue;
        };
        let section = &doc.sections[sec_idx];
        let Some(paragraph) = section.paragraphs.get(anchor.paragraph_index) else {
            stats.unmapped_anchors += 1;
            continue;
        };
        let para_spans = spans
            .entry((sec_idx, anchor.paragraph_index))
            .or_insert_with(|| segment_sentences(paragraph));
        let Some(sentence) = sentence_at(para_spans, anchor.char_start) else {
            stats.unmapped_anchors += 1;
            continue;
        };
        let Some(&kind) = kinds.get(&anchor.section_id) else {
            stats.unmapped_anchors += 1;
            continue;
        };

        for version in versions {
            let key = (
                sec_idx,
                anchor.paragraph_index,
                sentence.char_start,
                version.clone(),
            );
            if !seen.insert(key) {
                continue;
            }
            let publication_year = registry
                .publication_year(&version)
                .expect("matched versions exist in the registry");
            out.push(Citance {
                doc_id: doc.doc_id.clone(),
                section_id: anchor.section_id.clone(),
                paragraph_index: anchor.paragraph_index,
                text: sentence.text.clone(),
                char_start: sentence.char_start,
                char_end: sentence.char_end,
                version_id: version,
                section_kind: kind,
                citing_year: doc.publication_year,
                object_history_years: doc.publication_year - publication_year,
                features: FeatureVector::default(),
            });
        }
    }

    // document order regardless of how the anchor list was arranged
    out.sort_by(|a, b| {
        let ka = (
            section_pos[a.section_id.as_str()],
            a.paragraph_index,
            a.char_start,
            &a.version_id,
        );
        let kb = (
            section_pos[b.section_id.as_str()],
            b.paragraph_index,
            b.char_start,
            &b.version_id,
        );
        ka.cmp(&kb)
    });

    (out, stats)
}

/// Per-paper citance counts: (total, method, non-method). All citances must
/// come from the same document.
pub fn citances_per_paper(citances: &[Citance]) -> Result<(u64, u64, u64), CitanceError> {
    let mut method = 0u64;
    let mut non_method = 0u64;
    for c in citances {
        if c.doc_id != citances[0].doc_id {
            return Err(CitanceError::MixedDocuments(
                citances[0].doc_id.clone(),
                c.doc_id.clone(),
            ));
        }
        match c.section_kind {
            SectionKind::Method => method += 1,
            SectionKind::NonMethod => non_method += 1,
        }
    }
    Ok((method + non_method, method, non_method))
}
