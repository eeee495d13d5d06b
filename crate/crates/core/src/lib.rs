//! Corpus-analysis toolkit for studying how versioned research instruments are
//! cited in full-text scholarly articles.
//!
//! The pipeline classifies paper sections as Method or non-Method, resolves
//! normalized reference keys against a version registry, extracts citation
//! sentences (citances), scores them for interactional markers and readability,
//! profiles their main-clause verbs, and aggregates everything into version
//! summaries, temporal series, and rank-correlation tables.
//!
//! Per-document work is pure and data-parallel. With the `parallel` feature
//! (on by default) the driver fans documents out over a rayon pool; without it
//! the same code runs sequentially. Results are merged in document order in
//! both modes, so output bytes never depend on the worker count.

pub mod analytics;
pub mod citance;
pub mod config;
pub mod corpus;
pub mod lexicon;
pub mod pipeline;
pub mod readability;
pub mod registry;
pub mod report;
pub mod rng;
pub mod section;
pub mod segment;
pub mod stats;
pub mod synth;
pub mod tagger;
pub mod tokens;
pub mod verbs;

pub use citance::Citance;
pub use config::AnalysisConfig;
pub use corpus::Document;
pub use lexicon::MarkerLexicon;
pub use registry::VersionRegistry;
pub use section::SectionKind;
