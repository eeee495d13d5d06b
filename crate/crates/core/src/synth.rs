//! Seeded synthetic-corpus generator with a ground-truth sidecar.
//!
//! The generator plants exact quantities rather than sampling rates: each
//! (version, history year) bucket receives exactly the requested number of
//! citances, `round(n * p)` of them in Method sections, and `round(n_k * p)`
//! of each section kind carry each marker category. Which citances get which
//! markers, and which verbs they use, is drawn from the seeded PRNG, and the
//! sidecar records both the planted targets and the realized counts, so an
//! analysis run over the corpus can be checked bucket by bucket.
//!
//! Sentence templates deliberately avoid every phrase of the starter marker
//! lexicon and every subordinator, so a planted citance's marker hits and
//! primary verb are exactly what the generator says they are.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{serialize_document, CitationAnchor, Document, ReferenceEntry, SectionNode};
use crate::lexicon::MarkerCategory;
use crate::registry::VersionRegistry;
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synth spec: {0}")]
    InvalidSpec(String),
    #[error("spec references unknown version `{0}`")]
    UnknownVersion(String),
    #[error("version {version} history year {history} lands in calendar year {calendar}, outside {start}..={end}")]
    YearOutOfRange {
        version: String,
        history: i32,
        calendar: i32,
        start: i32,
        end: i32,
    },
    #[error("calendar year {year} needs {needed} citing docs but only has {available}")]
    InsufficientDocs {
        year: i32,
        needed: u64,
        available: u64,
    },
    #[error("spec is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Exact citance counts and a method-ratio curve for one version.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthVersion {
    pub version_id: String,
    /// (object history year, exact citance count) pairs.
    pub citances_per_year: Vec<(i32, u64)>,
    /// Piecewise-linear knots (history year, method ratio).
    pub method_ratio: Vec<(i32, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_docs: u64,
    pub year_start: i32,
    pub year_end: i32,
    pub versions: Vec<SynthVersion>,
    /// Marker insertion probabilities per section kind ("method",
    /// "non_method") and category.
    pub marker_probs: BTreeMap<String, BTreeMap<MarkerCategory, f64>>,
    /// Verb pools per section kind: (lemma, past form) pairs.
    pub verb_pools: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default = "default_max_citances_per_doc")]
    pub max_citances_per_doc: u64,
    #[serde(default = "default_journals")]
    pub journals: u32,
    /// Write pre-computed token tags into the corpus.
    #[serde(default)]
    pub emit_token_tags: bool,
    /// Every Nth citing document also gets one anchor to a non-registry
    /// reference (0 disables).
    #[serde(default)]
    pub noise_anchor_every: u64,
    #[serde(default = "default_reference_author")]
    pub reference_author: String,
}

fn default_max_citances_per_doc() -> u64 {
    2
}

fn default_journals() -> u32 {
    5
}

fn default_reference_author() -> String {
    "American Psychiatric Association".to_string()
}

impl SynthSpec {
    pub fn from_json(json: &str) -> Result<Self, SynthError> {
        let spec: SynthSpec = serde_json::from_str(json)?;
        Ok(spec)
    }

    /// The planted-trend demonstration spec: one version, eleven history
    /// years at 1,000 citances each, method ratio climbing 0.1 to 0.6.
    pub fn demo(seed: u64, citances_per_year: u64, n_docs: u64) -> Self {
        let mut method_probs = BTreeMap::new();
        method_probs.insert(MarkerCategory::Hedges, 0.05);
        method_probs.insert(MarkerCategory::Boosters, 0.10);
        method_probs.insert(MarkerCategory::Attitude, 0.20);
        method_probs.insert(MarkerCategory::SelfMention, 0.10);
        method_probs.insert(MarkerCategory::Engagement, 0.05);
        let mut non_method_probs = BTreeMap::new();
        non_method_probs.insert(MarkerCategory::Hedges, 0.20);
        non_method_probs.insert(MarkerCategory::Boosters, 0.10);
        non_method_probs.insert(MarkerCategory::Attitude, 0.05);
        non_method_probs.insert(MarkerCategory::SelfMention, 0.10);
        non_method_probs.insert(MarkerCategory::Engagement, 0.20);
        let mut marker_probs = BTreeMap::new();
        marker_probs.insert("method".to_string(), method_probs);
        marker_probs.insert("non_method".to_string(), non_method_probs);

        let pair = |l: &str, p: &str| (l.to_string(), p.to_string());
        let mut verb_pools = BTreeMap::new();
        verb_pools.insert(
            "method".to_string(),
            vec![
                pair("assess", "assessed"),
                pair("diagnose", "diagnosed"),
                pair("use", "used"),
                pair("meet", "met"),
                pair("include", "included"),
                pair("recruit", "recruited"),
                pair("administer", "administered"),
                pair("measure", "measured"),
            ],
        );
        verb_pools.insert(
            "non_method".to_string(),
            vec![
                pair("characterize", "characterized"),
                pair("define", "defined"),
                pair("classify", "classified"),
                pair("report", "reported"),
                pair("suggest", "suggested"),
                pair("find", "found"),
                pair("establish", "established"),
                pair("evaluate", "evaluated"),
            ],
        );

        SynthSpec {
            seed,
            n_docs,
            year_start: 2000,
            year_end: 2010,
            versions: vec![SynthVersion {
                version_id: "V4-TR".to_string(),
                citances_per_year: (0..=10).map(|h| (h, citances_per_year)).collect(),
                method_ratio: vec![(0, 0.1), (10, 0.6)],
            }],
            marker_probs,
            verb_pools,
            max_citances_per_doc: 2,
            journals: 5,
            emit_token_tags: false,
            noise_anchor_every: 50,
            reference_author: default_reference_author(),
        }
    }

    fn validate(&self, registry: &VersionRegistry) -> Result<(), SynthError> {
        if self.n_docs == 0 {
            return Err(SynthError::InvalidSpec("n_docs must be positive".into()));
        }
        if self.year_end < self.year_start {
            return Err(SynthError::InvalidSpec("year range is empty".into()));
        }
        if self.max_citances_per_doc == 0 {
            return Err(SynthError::InvalidSpec(
                "max_citances_per_doc must be positive".into(),
            ));
        }
        for kind in ["method", "non_method"] {
            let pool = self
                .verb_pools
                .get(kind)
                .ok_or_else(|| SynthError::InvalidSpec(format!("verb pool `{kind}` missing")))?;
            if pool.is_empty() {
                return Err(SynthError::InvalidSpec(format!(
                    "verb pool `{kind}` is empty"
                )));
            }
            let probs = self
                .marker_probs
                .get(kind)
                .ok_or_else(|| SynthError::InvalidSpec(format!("marker probs `{kind}` missing")))?;
            for (cat, p) in probs {
                if !(0.0..=1.0).contains(p) {
                    return Err(SynthError::InvalidSpec(format!(
                        "marker probability {cat} = {p} outside [0,1]"
                    )));
                }
            }
        }
        for v in &self.versions {
            let year = registry
                .publication_year(&v.version_id)
                .map_err(|_| SynthError::UnknownVersion(v.version_id.clone()))?;
            if v.method_ratio.is_empty() {
                return Err(SynthError::InvalidSpec(format!(
                    "version {} has no method-ratio knots",
                    v.version_id
                )));
            }
            for (_, p) in &v.method_ratio {
                if !(0.0..=1.0).contains(p) {
                    return Err(SynthError::InvalidSpec(format!(
                        "method ratio {p} outside [0,1]"
                    )));
                }
            }
            for (h, _) in &v.citances_per_year {
                let calendar = year + h;
                if calendar < self.year_start || calendar > self.year_end {
                    return Err(SynthError::YearOutOfRange {
                        version: v.version_id.clone(),
                        history: *h,
                        calendar,
                        start: self.year_start,
                        end: self.year_end,
                    });
                }
            }
        }
        Ok(())
    }
}

fn interpolate(knots: &[(i32, f64)], h: i32) -> f64 {
    let mut sorted: Vec<(i32, f64)> = knots.to_vec();
    sorted.sort_by_key(|(x, _)| *x);
    if h <= sorted[0].0 {
        return sorted[0].1;
    }
    if h >= sorted[sorted.len() - 1].0 {
        return sorted[sorted.len() - 1].1;
    }
    for w in sorted.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if h >= x0 && h <= x1 {
            if x1 == x0 {
                return y1;
            }
            let t = (h - x0) as f64 / (x1 - x0) as f64;
            return y0 + t * (y1 - y0);
        }
    }
    sorted[sorted.len() - 1].1
}

/// Planted truth for one (version, history year) bucket.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BucketTruth {
    pub version_id: String,
    pub history_year: i32,
    pub calendar_year: i32,
    pub citances: u64,
    pub method_citances: u64,
    pub citing_papers: u64,
    pub target_method_ratio: f64,
    /// Realized marker-carrying citance counts per section kind.
    pub marker_counts: BTreeMap<String, BTreeMap<MarkerCategory, u64>>,
    /// The probabilities the counts were derived from.
    pub marker_targets: BTreeMap<String, BTreeMap<MarkerCategory, f64>>,
    /// Kind-weighted target marker ratio over the whole bucket.
    pub combined_marker_target: BTreeMap<MarkerCategory, f64>,
}

/// Everything the generator planted, written next to the corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub n_docs: u64,
    pub docs_per_year: BTreeMap<i32, u64>,
    pub buckets: Vec<BucketTruth>,
    /// Planted primary-verb lemma multisets: "all", "method", "non_method".
    pub verb_counts: BTreeMap<String, BTreeMap<String, u64>>,
    pub skipped_anchor_count: u64,
    pub methodful_papers: u64,
    pub citing_papers_by_version: BTreeMap<String, u64>,
    /// Distinct citing documents per calendar year, any version.
    pub citing_papers_by_year: BTreeMap<i32, u64>,
}

/// Part-of-speech tags for the generator's closed vocabulary.
fn synth_tag(word: &str) -> &'static str {
    match word {
        "the" => "DT",
        "our" => "PRP$",
        "a" => "DT",
        "clinicians" | "researchers" | "investigators" | "outcomes" | "scores" | "sites"
        | "thresholds" | "criteria" | "data" => "NNS",
        "anxiety" | "depression" | "insomnia" | "psychosis" | "baseline" | "intake"
        | "screening" | "interview" | "study" | "time" | "severity" | "sample" | "followup"
        | "approval" | "enrollment" | "way" => "NN",
        "for" | "at" | "during" | "over" | "across" | "by" | "before" => "IN",
        "obviously" | "unfortunately" | "perhaps" => "RB",
        "clinical" | "stable" | "ethical" => "JJ",
        "examined" | "varied" | "remained" | "was" | "were" => "VBD",
        "collected" | "obtained" => "VBN",
        w if w.starts_with("dsm-") => "NN",
        _ => "VBD", // pool verb past forms
    }
}

/// One generated sentence: rendered text plus its token/tag stream.
struct BuiltSentence {
    text: String,
    tokens: Vec<(String, &'static str)>,
    /// Code point span of the anchor target token, when the sentence is a
    /// citance.
    anchor_span: Option<(usize, usize)>,
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

/// Render a word sequence as a sentence, uppercasing the first letter, the
/// instrument label, and appending a period. Returns the rendered text and
/// the code point span of `anchor_word` within it.
fn render_sentence(
    words: &[String],
    anchor_word: Option<usize>,
) -> (String, Option<(usize, usize)>) {
    let mut text = String::new();
    let mut span = None;
    let mut offset = 0usize;
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            text.push(' ');
            offset += 1;
        }
        let rendered = if w.starts_with("dsm-") {
            w.to_uppercase()
        } else if i == 0 {
            capitalize(w)
        } else {
            w.clone()
        };
        let len = rendered.chars().count();
        if Some(i) == anchor_word {
            span = Some((offset, offset + len));
        }
        text.push_str(&rendered);
        offset += len;
    }
    text.push('.');
    (text, span)
}

const SUBJECTS: [&str; 3] = ["clinicians", "researchers", "investigators"];
const CONDITIONS: [&str; 4] = ["anxiety", "depression", "insomnia", "psychosis"];
const PHASES: [&str; 3] = ["baseline", "intake", "screening"];

struct CitancePlan {
    method: bool,
    markers: Vec<MarkerCategory>,
    verb_past: String,
    version_id: String,
}

fn build_citance_sentence(plan: &CitancePlan, label: &str, counter: u64) -> BuiltSentence {
    let subject = SUBJECTS[(counter % SUBJECTS.len() as u64) as usize];
    let condition = CONDITIONS[(counter % CONDITIONS.len() as u64) as usize];
    let phase = PHASES[(counter % PHASES.len() as u64) as usize];

    let mut words: Vec<String> = Vec::new();
    if plan.markers.contains(&MarkerCategory::Engagement) {
        words.extend(["by", "the", "way"].map(str::to_string));
    }
    if plan.markers.contains(&MarkerCategory::Boosters) {
        words.push("obviously".to_string());
    }
    if plan.markers.contains(&MarkerCategory::Attitude) {
        words.push("unfortunately".to_string());
    }
    let determiner = if plan.markers.contains(&MarkerCategory::SelfMention) {
        "our"
    } else {
        "the"
    };
    words.push(determiner.to_string());
    words.push(subject.to_string());
    if plan.markers.contains(&MarkerCategory::Hedges) {
        words.push("perhaps".to_string());
    }
    words.push(plan.verb_past.clone());
    words.push("the".to_string());
    let anchor_index = words.len();
    words.push(label.to_string());
    match counter % 3 {
        0 => {
            words.push("criteria".to_string());
            words.push("for".to_string());
            words.push(condition.to_string());
        }
        1 => {
            words.push("thresholds".to_string());
            words.push("at".to_string());
            words.push(phase.to_string());
        }
        _ => {
            words.push("interview".to_string());
            words.push("during".to_string());
            words.push(phase.to_string());
        }
    }

    let (text, anchor_span) = render_sentence(&words, Some(anchor_index));
    let tokens = words.iter().map(|w| (w.clone(), synth_tag(w))).collect();
    BuiltSentence {
        text,
        tokens,
        anchor_span,
    }
}

const FILLERS: [&[&str]; 5] = [
    &[
        "the", "study", "examined", "clinical", "outcomes", "over", "time",
    ],
    &["data", "were", "collected", "at", "baseline"],
    &["severity", "scores", "varied", "across", "sites"],
    &["the", "sample", "remained", "stable", "during", "followup"],
    &[
        "ethical",
        "approval",
        "was",
        "obtained",
        "before",
        "enrollment",
    ],
];

fn build_filler(index: u64) -> BuiltSentence {
    let words: Vec<String> = FILLERS[(index % FILLERS.len() as u64) as usize]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (text, _) = render_sentence(&words, None);
    let tokens = words.iter().map(|w| (w.clone(), synth_tag(w))).collect();
    BuiltSentence {
        text,
        tokens,
        anchor_span: None,
    }
}

fn instrument_label(version_id: &str) -> String {
    format!("dsm-{}", version_id.trim_start_matches('V').to_lowercase())
}

/// Reference title variants cycling over the accepted prefixes.
const REFERENCE_TITLES: [&str; 4] = [
    "The Diagnostic and Statistical Manual of Mental Disorders",
    "Diagnostic and Statistical Manual of Mental Disorders",
    "DSM Diagnostic and Statistical Manual",
    "American Psychiatric Association Diagnostic Manual",
];

#[derive(Default)]
struct DocPlan {
    citances: Vec<(CitancePlan, u64)>, // plan plus a per-doc sequence number
}

/// A paragraph being assembled: sentences plus their token/tag streams and
/// any anchors, with offsets tracked in code points.
#[derive(Default)]
struct ParagraphBuilder {
    text: String,
    offset: usize,
    tags: Vec<String>,
    anchors: Vec<(usize, usize, String)>, // (start, end, ref_id)
}

impl ParagraphBuilder {
    fn push(&mut self, sentence: &BuiltSentence, ref_id: Option<&str>) {
        if !self.text.is_empty() {
            self.text.push(' ');
            self.offset += 1;
        }
        if let (Some((s, e)), Some(rid)) = (sentence.anchor_span, ref_id) {
            self.anchors
                .push((self.offset + s, self.offset + e, rid.to_string()));
        }
        self.text.push_str(&sentence.text);
        self.offset += sentence.text.chars().count();
        self.tags
            .extend(sentence.tokens.iter().map(|(_, t)| t.to_string()));
    }
}

/// Generate the corpus and its ground truth. The same spec and registry
/// always produce byte-identical output.
pub fn generate(
    spec: &SynthSpec,
    registry: &VersionRegistry,
) -> Result<(Vec<Document>, GroundTruth), SynthError> {
    spec.validate(registry)?;

    // documents per calendar year
    let years: Vec<i32> = (spec.year_start..=spec.year_end).collect();
    let base = spec.n_docs / years.len() as u64;
    let rem = spec.n_docs % years.len() as u64;
    let mut docs_per_year: BTreeMap<i32, u64> = BTreeMap::new();
    for (i, y) in years.iter().enumerate() {
        docs_per_year.insert(*y, base + u64::from((i as u64) < rem));
    }

    // doc index layout: per year, ids synth-<year>-<i>
    let mut doc_plans: BTreeMap<(i32, u64), DocPlan> = BTreeMap::new();
    let mut year_cursor: BTreeMap<i32, u64> = BTreeMap::new();

    let mut buckets = Vec::new();
    let mut verb_counts: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    verb_counts.insert("all".into(), BTreeMap::new());
    verb_counts.insert("method".into(), BTreeMap::new());
    verb_counts.insert("non_method".into(), BTreeMap::new());
    let mut citing_docs_by_version: BTreeMap<String, BTreeSet<(i32, u64)>> = BTreeMap::new();
    let mut citing_docs_by_year: BTreeMap<i32, BTreeSet<u64>> = BTreeMap::new();

    let root = SplitMix64::new(spec.seed);

    for version in &spec.versions {
        let publication_year = registry
            .publication_year(&version.version_id)
            .expect("validated above");
        let mut per_year = version.citances_per_year.clone();
        per_year.sort_by_key(|(h, _)| *h);

        for (history, count) in per_year {
            if count == 0 {
                continue;
            }
            let calendar = publication_year + history;
            let available = docs_per_year[&calendar];
            let needed = count.div_ceil(spec.max_citances_per_doc);
            if needed > available {
                return Err(SynthError::InsufficientDocs {
                    year: calendar,
                    needed,
                    available,
                });
            }

            let target_method_ratio = interpolate(&version.method_ratio, history);
            let method_citances = (count as f64 * target_method_ratio).round() as u64;
            let non_method_citances = count - method_citances;

            // marker assignment per kind: round(n * p) citances get each
            // category, chosen by a labeled shuffle
            let mut kind_flags: BTreeMap<&str, Vec<Vec<MarkerCategory>>> = BTreeMap::new();
            let mut marker_counts: BTreeMap<String, BTreeMap<MarkerCategory, u64>> =
                BTreeMap::new();
            let mut marker_targets: BTreeMap<String, BTreeMap<MarkerCategory, f64>> =
                BTreeMap::new();
            for (kind, n_kind) in [
                ("method", method_citances),
                ("non_method", non_method_citances),
            ] {
                let probs = &spec.marker_probs[kind];
                let mut flags: Vec<Vec<MarkerCategory>> = vec![Vec::new(); n_kind as usize];
                let mut counts = BTreeMap::new();
                let mut targets = BTreeMap::new();
                for cat in MarkerCategory::ALL {
                    let p = probs.get(&cat).copied().unwrap_or(0.0);
                    targets.insert(cat, p);
                    let k = ((n_kind as f64) * p).round() as u64;
                    counts.insert(cat, k.min(n_kind));
                    if n_kind == 0 || k == 0 {
                        continue;
                    }
                    let mut order: Vec<usize> = (0..n_kind as usize).collect();
                    let mut rng = root.fork(&format!(
                        "markers/{}/{}/{}/{}",
                        version.version_id,
                        history,
                        kind,
                        cat.key()
                    ));
                    rng.shuffle(&mut order);
                    for &idx in order.iter().take(k.min(n_kind) as usize) {
                        flags[idx].push(cat);
                    }
                }
                kind_flags.insert(kind, flags);
                marker_counts.insert(kind.to_string(), counts);
                marker_targets.insert(kind.to_string(), targets);
            }

            let combined_marker_target: BTreeMap<MarkerCategory, f64> = MarkerCategory::ALL
                .iter()
                .map(|&cat| {
                    let m = marker_targets["method"][&cat] * method_citances as f64;
                    let n = marker_targets["non_method"][&cat] * non_method_citances as f64;
                    (cat, (m + n) / count as f64)
                })
                .collect();

            // verbs per citance
            let mut verb_rng = root.fork(&format!("verbs/{}/{}", version.version_id, history));

            // spread citances across `needed` docs starting at the year cursor
            let cursor = year_cursor.entry(calendar).or_insert(0);
            let mut assigned_docs: BTreeSet<(i32, u64)> = BTreeSet::new();
            let mut method_seen = 0u64;
            let mut non_method_seen = 0u64;
            for k in 0..count {
                let doc_index = (*cursor + (k % needed)) % available;
                let doc_key = (calendar, doc_index);
                assigned_docs.insert(doc_key);

                let method = k < method_citances;
                let kind = if method { "method" } else { "non_method" };
                let kind_idx = if method {
                    let i = method_seen;
                    method_seen += 1;
                    i
                } else {
                    let i = non_method_seen;
                    non_method_seen += 1;
                    i
                };
                let markers = kind_flags[kind][kind_idx as usize].clone();

                let pool = &spec.verb_pools[kind];
                let (lemma, past) = &pool[verb_rng.next_below(pool.len() as u64) as usize];
                for key in ["all", kind] {
                    *verb_counts
                        .get_mut(key)
                        .unwrap()
                        .entry(lemma.clone())
                        .or_insert(0) += 1;
                }

                doc_plans.entry(doc_key).or_default().citances.push((
                    CitancePlan {
                        method,
                        markers,
                        verb_past: past.clone(),
                        version_id: version.version_id.clone(),
                    },
                    k,
                ));
            }
            *cursor = (*cursor + needed) % available;

            citing_docs_by_version
                .entry(version.version_id.clone())
                .or_default()
                .extend(assigned_docs.iter().copied());
            citing_docs_by_year
                .entry(calendar)
                .or_default()
                .extend(assigned_docs.iter().map(|(_, idx)| *idx));

            buckets.push(BucketTruth {
                version_id: version.version_id.clone(),
                history_year: history,
                calendar_year: calendar,
                citances: count,
                method_citances,
                citing_papers: assigned_docs.len() as u64,
                target_method_ratio,
                marker_counts,
                marker_targets,
                combined_marker_target,
            });
        }
    }

    // assemble the documents in (year, index) order
    let mut documents = Vec::with_capacity(spec.n_docs as usize);
    let mut citing_counter = 0u64;
    let mut skipped_anchor_count = 0u64;
    let mut methodful_papers = 0u64;
    let empty_plan = DocPlan::default();

    for (&year, &n_year) in &docs_per_year {
        for index in 0..n_year {
            let doc_id = format!("synth-{year}-{index:05}");
            let journal_id = format!("journal-{:02}", index % spec.journals as u64);
            let plan = doc_plans.get(&(year, index)).unwrap_or(&empty_plan);
            let citing = !plan.citances.is_empty();
            // an occasional non-citing document has no Methods section at all
            let methodless = !citing && index % 7 == 3;

            let mut references: Vec<ReferenceEntry> = Vec::new();
            let mut ref_for_version: BTreeMap<&str, String> = BTreeMap::new();
            for (cplan, _) in &plan.citances {
                if !ref_for_version.contains_key(cplan.version_id.as_str()) {
                    let title_idx = (references.len() as u64 + index) % 4;
                    let ref_id = format!("ref-{}", cplan.version_id.to_lowercase());
                    references.push(ReferenceEntry {
                        ref_id: ref_id.clone(),
                        lead_contributor: spec.reference_author.clone(),
                        year: registry
                            .publication_year(&cplan.version_id)
                            .expect("validated above"),
                        title: REFERENCE_TITLES[title_idx as usize].to_string(),
                    });
                    ref_for_version.insert(cplan.version_id.as_str(), ref_id);
                }
            }

            let noise = citing && spec.noise_anchor_every > 0 && {
                citing_counter += 1;
                citing_counter.is_multiple_of(spec.noise_anchor_every)
            };
            if noise {
                references.push(ReferenceEntry {
                    ref_id: "ref-noise".to_string(),
                    lead_contributor: "Other Author".to_string(),
                    year: year - 1,
                    title: "Unrelated instrument handbook".to_string(),
                });
                skipped_anchor_count += 1;
            }

            // paragraphs per section, three citance sentences per paragraph
            let mut intro = vec![ParagraphBuilder::default()];
            intro[0].push(&build_filler(index), None);
            let mut methods = vec![ParagraphBuilder::default()];
            methods[0].push(&build_filler(index + 1), None);
            let mut discussion = vec![ParagraphBuilder::default()];
            discussion[0].push(&build_filler(index + 2), None);

            if noise {
                let filler = build_filler(index + 3);
                let len = filler
                    .tokens
                    .first()
                    .map(|(w, _)| w.chars().count())
                    .unwrap_or(1);
                let start = intro[0].offset + 1; // after the joining space
                intro[0].push(&filler, None);
                intro[0]
                    .anchors
                    .push((start, start + len, "ref-noise".to_string()));
            }

            let mut non_method_turn = false;
            for (seq, (cplan, bucket_seq)) in plan.citances.iter().enumerate() {
                let label = instrument_label(&cplan.version_id);
                let sentence =
                    build_citance_sentence(cplan, &label, bucket_seq + index + seq as u64);
                let ref_id = ref_for_version[cplan.version_id.as_str()].clone();
                let target = if cplan.method {
                    &mut methods
                } else {
                    non_method_turn = !non_method_turn;
                    if non_method_turn {
                        &mut intro
                    } else {
                        &mut discussion
                    }
                };
                if target.last().map(|p| p.tags.len()).unwrap_or(0) > 30 {
                    target.push(ParagraphBuilder::default());
                }
                target
                    .last_mut()
                    .expect("sections start with one paragraph")
                    .push(&sentence, Some(&ref_id));
            }

            let mut sections: Vec<SectionNode> = Vec::new();
            let mut anchors: Vec<CitationAnchor> = Vec::new();
            let emit_tags = spec.emit_token_tags;
            let add_section = |id: &str,
                               title: &str,
                               paragraphs: Vec<ParagraphBuilder>,
                               sections: &mut Vec<SectionNode>,
                               anchors: &mut Vec<CitationAnchor>| {
                let mut texts = Vec::new();
                let mut tags = Vec::new();
                for (pi, p) in paragraphs.into_iter().enumerate() {
                    for (start, end, ref_id) in p.anchors {
                        anchors.push(CitationAnchor {
                            section_id: id.to_string(),
                            paragraph_index: pi,
                            char_start: start,
                            char_end: end,
                            ref_ids: vec![ref_id],
                        });
                    }
                    texts.push(p.text);
                    tags.push(p.tags);
                }
                sections.push(SectionNode {
                    section_id: id.to_string(),
                    title: title.to_string(),
                    parent_id: None,
                    paragraphs: texts,
                    token_tags: emit_tags.then_some(tags),
                });
            };

            add_section("intro", "Introduction", intro, &mut sections, &mut anchors);
            if methodless {
                add_section(
                    "background",
                    "Background",
                    vec![{
                        let mut p = ParagraphBuilder::default();
                        p.push(&build_filler(index + 4), None);
                        p
                    }],
                    &mut sections,
                    &mut anchors,
                );
            } else {
                methodful_papers += 1;
                add_section("methods", "Methods", methods, &mut sections, &mut anchors);
            }
            add_section(
                "disc",
                "Discussion",
                discussion,
                &mut sections,
                &mut anchors,
            );

            documents.push(Document {
                doc_id,
                publication_year: year,
                journal_id,
                sections,
                references,
                anchors,
            });
        }
    }

    let truth = GroundTruth {
        seed: spec.seed,
        n_docs: spec.n_docs,
        docs_per_year,
        buckets,
        verb_counts,
        skipped_anchor_count,
        methodful_papers,
        citing_papers_by_version: citing_docs_by_version
            .into_iter()
            .map(|(v, docs)| (v, docs.len() as u64))
            .collect(),
        citing_papers_by_year: citing_docs_by_year
            .into_iter()
            .map(|(y, docs)| (y, docs.len() as u64))
            .collect(),
    };

    Ok((documents, truth))
}

/// Render a generated corpus as JSON Lines.
pub fn corpus_to_jsonl(documents: &[Document]) -> String {
    let mut out = String::new();
    for doc in documents {
        out.push_str(&serialize_document(doc));
        out.push('\n');
    }
    out
}
