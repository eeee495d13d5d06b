//! Aggregation of citances into version summaries, temporal series,
//! section-split marker tables, and cross-profile rank correlations.
//!
//! Ratios over empty groups are reported as absent rather than zero, so
//! report consumers skip sparse points instead of plotting fabricated zeros.
//! All groupings use ordered maps and the registry's version order, keeping
//! report rows deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::citance::Citance;
use crate::lexicon::MarkerCategory;
use crate::registry::VersionRegistry;
use crate::section::SectionKind;
use crate::stats::StatsError;
use crate::verbs::{build_verb_profile, profile_correlation, VerbProfile};

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("citances from multiple versions: expected `{0}`, found `{1}`")]
    MixedVersions(String, String),
}

/// One row of per-version summary measurements.
#[derive(Debug, Clone, Serialize)]
pub struct VersionSummary {
    pub version_id: String,
    pub citing_papers: u64,
    pub citing_papers_with_method_citance_ratio: Option<f64>,
    pub citances: u64,
    pub method_citances: u64,
    pub method_citance_ratio: Option<f64>,
    pub citances_per_paper: Option<f64>,
    pub marker_ratios: BTreeMap<MarkerCategory, f64>,
    pub hedging_ratio: Option<f64>,
    pub mean_readability: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn mean_flesch(
    citances: impl IntoIterator<Item = impl std::borrow::Borrow<Citance>>,
) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0u64;
    for c in citances {
        let c = c.borrow();
        if c.features.word_count > 0 {
            sum += c.features.flesch;
            n += 1;
        }
    }
    (n > 0).then(|| sum / n as f64)
}

/// Summarize one version's citances. All citances must share `version_id`.
pub fn summarize_version(
    version_id: &str,
    citances: &[&Citance],
) -> Result<VersionSummary, AnalyticsError> {
    let mut papers: BTreeSet<&str> = BTreeSet::new();
    let mut papers_with_method: BTreeSet<&str> = BTreeSet::new();
    let mut method_citances = 0u64;
    let mut marker_hits: BTreeMap<MarkerCategory, u64> = BTreeMap::new();

    for c in citances {
        if c.version_id != version_id {
            return Err(AnalyticsError::MixedVersions(
                version_id.to_string(),
                c.version_id.clone(),
            ));
        }
        papers.insert(&c.doc_id);
        if c.section_kind.is_method() {
            method_citances += 1;
            papers_with_method.insert(&c.doc_id);
        }
        for cat in MarkerCategory::ALL {
            if c.features.markers.is_hit(cat) {
                *marker_hits.entry(cat).or_insert(0) += 1;
            }
        }
    }

    let total = citances.len() as u64;
    let marker_ratios: BTreeMap<MarkerCategory, f64> = if total > 0 {
        MarkerCategory::ALL
            .iter()
            .map(|&cat| {
                (
                    cat,
                    marker_hits.get(&cat).copied().unwrap_or(0) as f64 / total as f64,
                )
            })
            .collect()
    } else {
        BTreeMap::new()
    };

    Ok(VersionSummary {
        version_id: version_id.to_string(),
        citing_papers: papers.len() as u64,
        citing_papers_with_method_citance_ratio: ratio(
            papers_with_method.len() as u64,
            papers.len() as u64,
        ),
        citances: total,
        method_citances,
        method_citance_ratio: ratio(method_citances, total),
        citances_per_paper: (!papers.is_empty()).then(|| total as f64 / papers.len() as f64),
        hedging_ratio: marker_ratios.get(&MarkerCategory::Hedges).copied(),
        marker_ratios,
        mean_readability: mean_flesch(citances.iter().copied()),
    })
}

/// One summary row per version that received at least one citance, in
/// registry order.
pub fn version_summaries(citances: &[Citance], registry: &VersionRegistry) -> Vec<VersionSummary> {
    let mut by_version: BTreeMap<&str, Vec<&Citance>> = BTreeMap::new();
    for c in citances {
        by_version.entry(&c.version_id).or_default().push(c);
    }
    registry
        .entries
        .iter()
        .filter_map(|e| {
            by_version.get(e.id.as_str()).map(|group| {
                summarize_version(&e.id, group).expect("grouping guarantees one version")
            })
        })
        .collect()
}

/// Metrics a temporal series can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalMetric {
    MethodRatio,
    CitancesPerPaperMethod,
    CitancesPerPaperNonMethod,
    MarkerRatio(MarkerCategory),
    MeanReadability,
}

impl TemporalMetric {
    pub const ALL: [TemporalMetric; 9] = [
        TemporalMetric::MethodRatio,
        TemporalMetric::CitancesPerPaperMethod,
        TemporalMetric::CitancesPerPaperNonMethod,
        TemporalMetric::MarkerRatio(MarkerCategory::Hedges),
        TemporalMetric::MarkerRatio(MarkerCategory::Boosters),
        TemporalMetric::MarkerRatio(MarkerCategory::Attitude),
        TemporalMetric::MarkerRatio(MarkerCategory::SelfMention),
        TemporalMetric::MarkerRatio(MarkerCategory::Engagement),
        TemporalMetric::MeanReadability,
    ];

    pub fn key(self) -> String {
        match self {
            TemporalMetric::MethodRatio => "method_ratio".to_string(),
            TemporalMetric::CitancesPerPaperMethod => "citances_per_paper_method".to_string(),
            TemporalMetric::CitancesPerPaperNonMethod => {
                "citances_per_paper_non_method".to_string()
            }
            TemporalMetric::MarkerRatio(cat) => format!("marker_ratio_{}", cat.key()),
            TemporalMetric::MeanReadability => "mean_readability".to_string(),
        }
    }
}

/// One (version, object-history-year) point of a temporal series.
#[derive(Debug, Clone, Serialize)]
pub struct TemporalPoint {
    pub version_id: String,
    pub object_history_year: i32,
    pub n_citances: u64,
    pub metric_value: f64,
    pub suppressed: bool,
}

#[derive(Default)]
struct Bucket<'a> {
    n: u64,
    method_n: u64,
    papers: BTreeSet<&'a str>,
    marker_hits: BTreeMap<MarkerCategory, u64>,
    flesch_sum: f64,
    flesch_n: u64,
}

fn bucketize<'a>(citances: &'a [Citance]) -> BTreeMap<(&'a str, i32), Bucket<'a>> {
    let mut buckets: BTreeMap<(&str, i32), Bucket> = BTreeMap::new();
    for c in citances {
        let b = buckets
            .entry((c.version_id.as_str(), c.object_history_years))
            .or_default();
        b.n += 1;
        b.papers.insert(&c.doc_id);
        if c.section_kind.is_method() {
            b.method_n += 1;
        }
        for cat in MarkerCategory::ALL {
            if c.features.markers.is_hit(cat) {
                *b.marker_hits.entry(cat).or_insert(0) += 1;
            }
        }
        if c.features.word_count > 0 {
            b.flesch_sum += c.features.flesch;
            b.flesch_n += 1;
        }
    }
    buckets
}

/// Temporal series of one metric per (version, object history year) bucket.
/// Buckets below `suppression_min` citances are flagged suppressed; buckets
/// with no citances do not exist. Points follow registry version order.
pub fn temporal_series(
    citances: &[Citance],
    metric: TemporalMetric,
    suppression_min: u64,
    registry: &VersionRegistry,
) -> Vec<TemporalPoint> {
    let buckets = bucketize(citances);
    let mut out = Vec::new();
    for entry in &registry.entries {
        for ((vid, year), b) in
            buckets.range((entry.id.as_str(), i32::MIN)..=(entry.id.as_str(), i32::MAX))
        {
            let value = match metric {
                TemporalMetric::MethodRatio => Some(b.method_n as f64 / b.n as f64),
                TemporalMetric::CitancesPerPaperMethod => {
                    Some(b.method_n as f64 / b.papers.len() as f64)
                }
                TemporalMetric::CitancesPerPaperNonMethod => {
                    Some((b.n - b.method_n) as f64 / b.papers.len() as f64)
                }
                TemporalMetric::MarkerRatio(cat) => {
                    Some(b.marker_hits.get(&cat).copied().unwrap_or(0) as f64 / b.n as f64)
                }
                TemporalMetric::MeanReadability => {
                    (b.flesch_n > 0).then(|| b.flesch_sum / b.flesch_n as f64)
                }
            };
            if let Some(metric_value) = value {
                out.push(TemporalPoint {
                    version_id: vid.to_string(),
                    object_history_year: *year,
                    n_citances: b.n,
                    metric_value,
                    suppressed: b.n < suppression_min,
                });
            }
        }
    }
    out
}

/// One marker-table row: marker ratios and readability for a
/// (version, section kind) group, plus "All"-version aggregate rows.
#[derive(Debug, Clone, Serialize)]
pub struct SectionMarkerRow {
    /// A version id, or "All" for the aggregate rows.
    pub version: String,
    pub section_kind: SectionKind,
    pub n_citances: u64,
    pub marker_ratios: BTreeMap<MarkerCategory, f64>,
    pub hedging_ratio: f64,
    pub mean_readability: Option<f64>,
}

fn marker_row(version: &str, kind: SectionKind, group: &[&Citance]) -> Option<SectionMarkerRow> {
    if group.is_empty() {
        return None;
    }
    let n = group.len() as u64;
    let mut ratios: BTreeMap<MarkerCategory, f64> = BTreeMap::new();
    for cat in MarkerCategory::ALL {
        let hits = group
            .iter()
            .filter(|c| c.features.markers.is_hit(cat))
            .count();
        ratios.insert(cat, hits as f64 / n as f64);
    }
    Some(SectionMarkerRow {
        version: version.to_string(),
        section_kind: kind,
        n_citances: n,
        hedging_ratio: ratios[&MarkerCategory::Hedges],
        marker_ratios: ratios,
        mean_readability: mean_flesch(group.iter().copied()),
    })
}

/// Marker table rows per (version, section kind), followed by "All" rows that
/// aggregate only the versions in `include_list`. Empty groups are omitted.
pub fn section_marker_table(
    citances: &[Citance],
    registry: &VersionRegistry,
    include_list: &[String],
) -> Vec<SectionMarkerRow> {
    let mut rows = Vec::new();
    for entry in &registry.entries {
        for kind in [SectionKind::Method, SectionKind::NonMethod] {
            let group: Vec<&Citance> = citances
                .iter()
                .filter(|c| c.version_id == entry.id && c.section_kind == kind)
                .collect();
            rows.extend(marker_row(&entry.id, kind, &group));
        }
    }
    for kind in [SectionKind::Method, SectionKind::NonMethod] {
        let group: Vec<&Citance> = citances
            .iter()
            .filter(|c| include_list.contains(&c.version_id) && c.section_kind == kind)
            .collect();
        rows.extend(marker_row("All", kind, &group));
    }
    rows
}

/// The verb profiles a correlation table is computed from: the three global
/// populations plus (all, method, non-method) triples per version.
#[derive(Debug, Clone)]
pub struct ProfileSet {
    pub all: VerbProfile,
    pub method: VerbProfile,
    pub non_method: VerbProfile,
    pub by_version: BTreeMap<String, [VerbProfile; 3]>,
    min_count: u64,
    stopverbs: Vec<String>,
}

/// Build every profile over the citances of the versions in `include_list`.
pub fn build_profile_set(
    citances: &[Citance],
    registry: &VersionRegistry,
    include_list: &[String],
    min_count: u64,
    stopverbs: &[String],
) -> ProfileSet {
    let included: Vec<&Citance> = citances
        .iter()
        .filter(|c| include_list.contains(&c.version_id))
        .collect();
    let of_kind = |kind: Option<SectionKind>, version: Option<&str>| -> Vec<&Citance> {
        included
            .iter()
            .filter(|c| kind.is_none_or(|k| c.section_kind == k))
            .filter(|c| version.is_none_or(|v| c.version_id == v))
            .copied()
            .collect()
    };

    let build = |items: Vec<&Citance>, label: String| {
        build_verb_profile(items, label, min_count, stopverbs)
    };

    let mut by_version = BTreeMap::new();
    for entry in &registry.entries {
        if !include_list.contains(&entry.id) {
            continue;
        }
        let any = of_kind(None, Some(&entry.id));
        if any.is_empty() {
            continue;
        }
        by_version.insert(
            entry.id.clone(),
            [
                build(any, format!("{}/all", entry.id)),
                build(
                    of_kind(Some(SectionKind::Method), Some(&entry.id)),
                    format!("{}/method", entry.id),
                ),
                build(
                    of_kind(Some(SectionKind::NonMethod), Some(&entry.id)),
                    format!("{}/non_method", entry.id),
                ),
            ],
        );
    }

    ProfileSet {
        all: build(of_kind(None, None), "all".to_string()),
        method: build(
            of_kind(Some(SectionKind::Method), None),
            "method".to_string(),
        ),
        non_method: build(
            of_kind(Some(SectionKind::NonMethod), None),
            "non_method".to_string(),
        ),
        by_version,
        min_count,
        stopverbs: stopverbs.to_vec(),
    }
}

/// One correlation table row; `rho` is absent when the pair is degenerate.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationRow {
    pub population_a: String,
    pub population_b: String,
    pub n: usize,
    pub rho: Option<f64>,
    pub status: &'static str,
}

impl ProfileSet {
    /// Shared candidate list for a profile pair: lemmas present in either
    /// population whose count in the global (all-citance) profile reaches
    /// `min_count`, stopverbs removed, ordered by global count then name.
    pub fn shared_candidates(&self, a: &VerbProfile, b: &VerbProfile) -> Vec<String> {
        let mut lemmas: BTreeSet<&String> = a.freq.keys().collect();
        lemmas.extend(b.freq.keys());
        let mut out: Vec<String> = lemmas
            .into_iter()
            .filter(|l| self.all.count(l) >= self.min_count)
            .filter(|l| !self.stopverbs.iter().any(|s| &s == l))
            .cloned()
            .collect();
        out.sort_by(|x, y| self.all.count(y).cmp(&self.all.count(x)).then(x.cmp(y)));
        out
    }
}

fn correlate(set: &ProfileSet, a: &VerbProfile, b: &VerbProfile) -> CorrelationRow {
    let candidates = set.shared_candidates(a, b);
    match profile_correlation(a, b, &candidates) {
        Ok(res) => CorrelationRow {
            population_a: res.pair.0,
            population_b: res.pair.1,
            n: res.n,
            rho: Some(res.rho),
            status: "ok",
        },
        Err(StatsError::DegenerateRanks(_)) => CorrelationRow {
            population_a: a.population.clone(),
            population_b: b.population.clone(),
            n: candidates.len(),
            rho: None,
            status: "degenerate",
        },
        Err(StatsError::TooFewCandidates) => CorrelationRow {
            population_a: a.population.clone(),
            population_b: b.population.clone(),
            n: candidates.len(),
            rho: None,
            status: "too_few_candidates",
        },
    }
}

/// Every correlation the report carries: the three global pairs, then each
/// version's lists against the corresponding general lists. A population with
/// no verbs at all produces no rows.
pub fn cross_profile_correlations(set: &ProfileSet) -> Vec<CorrelationRow> {
    if set.all.freq.is_empty() {
        return Vec::new();
    }
    let mut rows = vec![
        correlate(set, &set.all, &set.method),
        correlate(set, &set.all, &set.non_method),
        correlate(set, &set.method, &set.non_method),
    ];
    for [v_all, v_method, v_non_method] in set.by_version.values() {
        rows.push(correlate(set, v_all, &set.method));
        rows.push(correlate(set, v_all, &set.non_method));
        rows.push(correlate(set, v_method, &set.method));
        rows.push(correlate(set, v_non_method, &set.non_method));
    }
    rows
}

/// A citing-ratio point on either the calendar-year or object-history axis.
#[derive(Debug, Clone, Serialize)]
pub struct CitingRatioPoint {
    /// "calendar" (all versions pooled, x = publication year) or
    /// "history" (per version, x = object history year).
    pub axis: &'static str,
    pub version_id: Option<String>,
    pub year: i32,
    pub citing_papers: u64,
    pub total_papers: u64,
    pub ratio: f64,
}

/// Ratios of citing articles among all sampled articles, per calendar year
/// and per (version, history year). Years without sampled papers are omitted.
pub fn citing_ratio_series(
    docs_per_year: &BTreeMap<i32, u64>,
    citances: &[Citance],
    registry: &VersionRegistry,
) -> Vec<CitingRatioPoint> {
    let mut out = Vec::new();

    let mut citing_by_year: BTreeMap<i32, BTreeSet<&str>> = BTreeMap::new();
    let mut citing_by_bucket: BTreeMap<(&str, i32), BTreeSet<&str>> = BTreeMap::new();
    for c in citances {
        citing_by_year
            .entry(c.citing_year)
            .or_default()
            .insert(&c.doc_id);
        citing_by_bucket
            .entry((c.version_id.as_str(), c.object_history_years))
            .or_default()
            .insert(&c.doc_id);
    }

    for (&year, &total) in docs_per_year {
        if total == 0 {
            continue;
        }
        let citing = citing_by_year.get(&year).map_or(0, |s| s.len() as u64);
        out.push(CitingRatioPoint {
            axis: "calendar",
            version_id: None,
            year,
            citing_papers: citing,
            total_papers: total,
            ratio: citing as f64 / total as f64,
        });
    }

    for entry in &registry.entries {
        for ((vid, history), docs) in
            citing_by_bucket.range((entry.id.as_str(), i32::MIN)..=(entry.id.as_str(), i32::MAX))
        {
            let calendar_year = entry.year + history;
            let Some(&total) = docs_per_year.get(&calendar_year) else {
                continue;
            };
            if total == 0 {
                continue;
            }
            out.push(CitingRatioPoint {
                axis: "history",
                version_id: Some(vid.to_string()),
                year: *history,
                citing_papers: docs.len() as u64,
                total_papers: total,
                ratio: docs.len() as f64 / total as f64,
            });
        }
    }
    out
}
