//! End-to-end corpus processing.
//!
//! Per-document work (parse, validate, classify, extract, feature scoring)
//! is a pure function, so documents fan out across a rayon pool when the
//! `parallel` feature is enabled (and `workers != 1`). Batches are mapped in
//! input order and folded sequentially, which makes the merged result, and
//! therefore every output byte, independent of the worker count. Without the
//! feature the same batches run on one thread.

use std::collections::BTreeMap;
use std::io::BufRead;

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::analytics::{
    build_profile_set, citing_ratio_series, cross_profile_correlations, section_marker_table,
    temporal_series, version_summaries, TemporalMetric,
};
use crate::citance::{extract_citances, Citance, ExtractionStats, FeatureVector};
use crate::config::AnalysisConfig;
use crate::corpus::{parse_document_record, validate_document, ParseError, Violation};
use crate::lexicon::{match_markers, MarkerLexicon};
use crate::readability::{flesch_score, sentence_counts};
use crate::registry::{RegistryError, VersionRegistry};
use crate::report::{top_verb_rows, ReportBundle};
use crate::section::{classify_sections, MethodCoverage, TitleRuleSet};
use crate::tagger::{tag_with_override, PerceptronTagger, TaggerError};
use crate::tokens::{tagging_tokens, word_tokens};
use crate::verbs::extract_primary_verbs;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("cannot start worker pool: {0}")]
    WorkerPool(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Tagger(#[from] TaggerError),
    #[error("cannot load {0}: {1}")]
    Resource(String, std::io::Error),
    #[error("lexicon: {0}")]
    Lexicon(#[from] crate::lexicon::LexiconError),
}

/// Immutable shared context for an analysis run.
pub struct Pipeline {
    pub registry: VersionRegistry,
    pub lexicon: MarkerLexicon,
    pub tagger: PerceptronTagger,
    pub rules: TitleRuleSet,
}

impl Pipeline {
    /// Assemble a pipeline from an [`AnalysisConfig`], loading files where
    /// paths are set and falling back to the embedded defaults otherwise.
    pub fn from_config(config: &AnalysisConfig) -> Result<Self, PipelineError> {
        let read = |path: &std::path::PathBuf| {
            std::fs::read_to_string(path)
                .map_err(|e| PipelineError::Resource(path.display().to_string(), e))
        };
        let registry = match &config.registry {
            Some(p) => VersionRegistry::from_json(&read(p)?)?,
            None => VersionRegistry::dsm_default(),
        };
        let lexicon = match &config.lexicon {
            Some(p) => MarkerLexicon::from_json(&read(p)?)?,
            None => MarkerLexicon::starter(),
        };
        let tagger = match &config.tagger_model {
            Some(p) => PerceptronTagger::from_json(&read(p)?)?,
            None => PerceptronTagger::embedded(),
        };
        let rules = match (&config.method_include_terms, &config.method_exclude_terms) {
            (None, None) => TitleRuleSet::default(),
            (include, exclude) => TitleRuleSet::new(
                include.clone().unwrap_or_else(|| {
                    [
                        "experimental",
                        "methodology",
                        "methodologies",
                        "method",
                        "methods",
                    ]
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
                }),
                exclude.clone().unwrap_or_else(|| {
                    ["experiment", "experiments"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect()
                }),
            ),
        };
        Ok(Pipeline {
            registry,
            lexicon,
            tagger,
            rules,
        })
    }
}

/// The result of processing one document.
#[derive(Debug)]
pub struct DocOutcome {
    pub doc_id: String,
    pub publication_year: i32,
    pub citances: Vec<Citance>,
    pub coverage: MethodCoverage,
    pub extraction: ExtractionStats,
    pub violations: Vec<Violation>,
}

/// Linguistic features of one sentence: marker hits, readability, and
/// primary-verb lemmas. `pre_tags`, when aligned, replaces the tagger.
pub fn compute_features(
    text: &str,
    lexicon: &MarkerLexicon,
    tagger: &PerceptronTagger,
    pre_tags: Option<&[String]>,
) -> FeatureVector {
    let words: Vec<String> = word_tokens(text).into_iter().map(|t| t.text).collect();
    let markers = match_markers(&words, lexicon);
    let (word_count, syllable_count) = sentence_counts(&words);
    let flesch = flesch_score(&words).unwrap_or(0.0);

    let tag_input: Vec<String> = tagging_tokens(text).into_iter().map(|t| t.text).collect();
    let tagged = tag_with_override(tagger, &tag_input, pre_tags);
    let primary_verbs = extract_primary_verbs(&tagged);

    FeatureVector {
        markers,
        flesch,
        word_count,
        syllable_count,
        primary_verbs,
    }
}

/// Parse, validate, classify, extract, and score one corpus record. A record
/// with validation violations is returned with them attached and no citances.
pub fn process_record(line: &str, pipeline: &Pipeline) -> Result<DocOutcome, ParseError> {
    let doc = parse_document_record(line)?;
    let report = validate_document(&doc);
    if !report.is_clean() {
        return Ok(DocOutcome {
            doc_id: doc.doc_id.clone(),
            publication_year: doc.publication_year,
            citances: Vec::new(),
            coverage: MethodCoverage::default(),
            extraction: ExtractionStats::default(),
            violations: report.violations,
        });
    }

    let kinds = classify_sections(&doc, &pipeline.rules)
        .expect("validated documents have a well-formed section tree");
    let (mut citances, extraction) = extract_citances(&doc, &kinds, &pipeline.registry);

    // paragraph-level tagging tokens are shared by the citances of one
    // paragraph; compute them lazily
    let mut para_cache: BTreeMap<(usize, usize), (Vec<crate::tokens::Token>, Option<usize>)> =
        BTreeMap::new();
    let section_index: BTreeMap<&str, usize> = doc
        .sections
        .iter()
        .enumerate()
        .map(|(i, s)| (s.section_id.as_str(), i))
        .collect();

    for c in &mut citances {
        let sec_idx = section_index[c.section_id.as_str()];
        let section = &doc.sections[sec_idx];
        let key = (sec_idx, c.paragraph_index);
        let (para_tokens, _) = para_cache.entry(key).or_insert_with(|| {
            let toks = tagging_tokens(&section.paragraphs[c.paragraph_index]);
            (toks, None)
        });

        let pre_tags: Option<Vec<String>> = section.token_tags.as_ref().and_then(|tags| {
            let para_tags = tags.get(c.paragraph_index)?;
            if para_tags.len() != para_tokens.len() {
                return None;
            }
            let mut slice = Vec::new();
            for (tok, tag) in para_tokens.iter().zip(para_tags) {
                if tok.start >= c.char_start && tok.end <= c.char_end {
                    slice.push(tag.clone());
                }
            }
            Some(slice)
        });

        c.features = compute_features(
            &c.text,
            &pipeline.lexicon,
            &pipeline.tagger,
            pre_tags.as_deref(),
        );
    }

    let mut coverage = MethodCoverage::default();
    coverage.add_document(&doc, &pipeline.rules);

    Ok(DocOutcome {
        doc_id: doc.doc_id.clone(),
        publication_year: doc.publication_year,
        citances,
        coverage,
        extraction,
        violations: Vec::new(),
    })
}

/// Whole-corpus aggregates, merged in document order.
#[derive(Debug, Default)]
pub struct CorpusAnalysis {
    pub citances: Vec<Citance>,
    pub docs_per_year: BTreeMap<i32, u64>,
    pub total_docs: u64,
    pub invalid_docs: u64,
    pub coverage: MethodCoverage,
    pub extraction: ExtractionStats,
}

impl CorpusAnalysis {
    fn fold(&mut self, outcome: DocOutcome) {
        self.total_docs += 1;
        if !outcome.violations.is_empty() {
            self.invalid_docs += 1;
            return;
        }
        *self
            .docs_per_year
            .entry(outcome.publication_year)
            .or_insert(0) += 1;
        self.citances.extend(outcome.citances);
        self.coverage.merge(&outcome.coverage);
        self.extraction.merge(outcome.extraction);
    }
}

const BATCH_LINES: usize = 512;

fn read_batch(
    reader: &mut impl BufRead,
    batch: &mut Vec<String>,
    line_no: &mut usize,
) -> Result<(), PipelineError> {
    batch.clear();
    let mut buf = String::new();
    while batch.len() < BATCH_LINES {
        buf.clear();
        if reader.read_line(&mut buf)? == 0 {
            break;
        }
        *line_no += 1;
        let line = buf.trim_end_matches(['\n', '\r']);
        if !line.trim().is_empty() {
            batch.push(line.to_string());
        }
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn build_pool(workers: usize) -> Result<Option<rayon::ThreadPool>, PipelineError> {
    if workers == 1 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map(Some)
        .map_err(|e| PipelineError::WorkerPool(e.to_string()))
}

/// Run the pipeline over a JSON Lines corpus. `workers == 1` forces the
/// sequential path; `workers == 0` uses every available core.
pub fn analyze_corpus(
    mut reader: impl BufRead,
    pipeline: &Pipeline,
    workers: usize,
) -> Result<CorpusAnalysis, PipelineError> {
    #[cfg(feature = "parallel")]
    let pool = build_pool(workers)?;
    #[cfg(not(feature = "parallel"))]
    let _ = workers;

    let mut analysis = CorpusAnalysis::default();
    let mut batch: Vec<String> = Vec::with_capacity(BATCH_LINES);
    let mut line_no = 0usize;

    loop {
        let batch_start = line_no;
        read_batch(&mut reader, &mut batch, &mut line_no)?;
        if batch.is_empty() {
            break;
        }

        #[cfg(feature = "parallel")]
        let outcomes: Vec<Result<DocOutcome, ParseError>> = match &pool {
            Some(pool) => pool.install(|| {
                batch
                    .par_iter()
                    .map(|line| process_record(line, pipeline))
                    .collect()
            }),
            None => batch
                .iter()
                .map(|line| process_record(line, pipeline))
                .collect(),
        };
        #[cfg(not(feature = "parallel"))]
        let outcomes: Vec<Result<DocOutcome, ParseError>> = batch
            .iter()
            .map(|line| process_record(line, pipeline))
            .collect();

        for (offset, outcome) in outcomes.into_iter().enumerate() {
            let outcome = outcome.map_err(|source| PipelineError::Parse {
                line: batch_start + offset + 1,
                source,
            })?;
            analysis.fold(outcome);
        }
    }
    Ok(analysis)
}

/// Compute every report table from a finished corpus analysis.
pub fn build_reports(
    analysis: &CorpusAnalysis,
    pipeline: &Pipeline,
    config: &AnalysisConfig,
) -> ReportBundle {
    let registry = &pipeline.registry;
    let include = &config.version_include_list;

    let profiles = build_profile_set(
        &analysis.citances,
        registry,
        include,
        config.verb_min_count,
        &config.stopverbs,
    );

    let mut temporal = Vec::new();
    for metric in TemporalMetric::ALL {
        for point in temporal_series(&analysis.citances, metric, config.suppression_min, registry) {
            temporal.push((metric.key(), point));
        }
    }

    ReportBundle {
        versions: version_summaries(&analysis.citances, registry),
        markers_by_section: section_marker_table(&analysis.citances, registry, include),
        top_verbs: top_verb_rows(&profiles.all, &profiles.method, &profiles.non_method, 10),
        correlations: cross_profile_correlations(&profiles),
        temporal,
        citing_ratio: citing_ratio_series(&analysis.docs_per_year, &analysis.citances, registry),
    }
}

/// Validation outcome of one corpus line.
#[derive(Debug)]
pub struct CorpusViolation {
    pub line: usize,
    pub doc_id: String,
    pub violation: Violation,
}

/// Validate every record of a corpus, including cross-document doc_id
/// uniqueness. Parse failures are hard errors; violations are data.
pub fn validate_corpus(mut reader: impl BufRead) -> Result<Vec<CorpusViolation>, PipelineError> {
    use crate::corpus::ViolationCode;

    let mut violations = Vec::new();
    let mut seen_ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut buf = String::new();
    let mut line_no = 0usize;
    loop {
        buf.clear();
        if reader.read_line(&mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = buf.trim();
        if line.is_empty() {
            continue;
        }
        let doc = parse_document_record(line).map_err(|source| PipelineError::Parse {
            line: line_no,
            source,
        })?;
        for violation in validate_document(&doc).violations {
            violations.push(CorpusViolation {
                line: line_no,
                doc_id: doc.doc_id.clone(),
                violation,
            });
        }
        if let Some(first) = seen_ids.get(&doc.doc_id) {
            violations.push(CorpusViolation {
                line: line_no,
                doc_id: doc.doc_id.clone(),
                violation: Violation {
                    code: ViolationCode::DuplicateDocId,
                    location: format!("duplicate of line {first}"),
                },
            });
        } else {
            seen_ids.insert(doc.doc_id.clone(), line_no);
        }
    }
    Ok(violations)
}
