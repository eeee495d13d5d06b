//! `citance`: citation-context analysis over JSON Lines corpora.
//!
//! Four subcommands: `validate` checks corpus records against the schema
//! invariants, `analyze` runs the full pipeline and writes the report CSVs,
//! `synth` generates a seeded synthetic corpus with a ground-truth sidecar,
//! and `inspect` prints the feature breakdown of a single sentence.
//!
//! Exit codes: 0 success, 1 data violations or empty input, 2 usage or
//! environment error.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use citance_core::config::AnalysisConfig;
use citance_core::lexicon::MarkerCategory;
use citance_core::pipeline::{
    analyze_corpus, build_reports, compute_features, validate_corpus, Pipeline,
};
use citance_core::registry::VersionRegistry;
use citance_core::report::write_reports;
use citance_core::synth::{corpus_to_jsonl, generate, SynthSpec};

#[derive(Parser)]
#[command(
    name = "citance",
    version,
    about = "Citation-context analysis of versioned research instruments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ConfigOverrides {
    /// JSON config file; every key can be overridden by the flag of the
    /// same name
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON Lines corpus to read
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Version registry JSON (default: the embedded DSM registry)
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Marker lexicon JSON (default: the embedded starter lexicon)
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Tagger model JSON (default: the embedded model)
    #[arg(long = "tagger-model")]
    tagger_model: Option<PathBuf>,
    /// Report output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (1 = sequential, 0 = all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Minimum citances per temporal bucket before a point is plotted
    #[arg(long = "suppression-min")]
    suppression_min: Option<u64>,
    /// Minimum global lemma count for verb-profile candidates
    #[arg(long = "verb-min-count")]
    verb_min_count: Option<u64>,
    /// Also write every citance with its features as JSON Lines
    #[arg(long = "emit-citances")]
    emit_citances: Option<PathBuf>,
}

impl ConfigOverrides {
    fn resolve(&self) -> Result<AnalysisConfig> {
        let mut config = match &self.config {
            Some(path) => AnalysisConfig::load(path)?,
            None => AnalysisConfig::default(),
        };
        if let Some(v) = &self.corpus {
            config.corpus = Some(v.clone());
        }
        if let Some(v) = &self.registry {
            config.registry = Some(v.clone());
        }
        if let Some(v) = &self.lexicon {
            config.lexicon = Some(v.clone());
        }
        if let Some(v) = &self.tagger_model {
            config.tagger_model = Some(v.clone());
        }
        if let Some(v) = &self.out {
            config.out = Some(v.clone());
        }
        if let Some(v) = self.workers {
            config.workers = v;
        }
        if let Some(v) = self.suppression_min {
            config.suppression_min = v;
        }
        if let Some(v) = self.verb_min_count {
            config.verb_min_count = v;
        }
        if let Some(v) = &self.emit_citances {
            config.emit_citances = Some(v.clone());
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every corpus record against the schema invariants
    Validate {
        #[command(flatten)]
        overrides: ConfigOverrides,
    },
    /// Run the full analysis and write the report CSVs
    Analyze {
        #[command(flatten)]
        overrides: ConfigOverrides,
    },
    /// Generate a seeded synthetic corpus plus its ground-truth sidecar
    Synth {
        /// Synth spec JSON; omitted = the built-in demonstration spec
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Corpus output path (JSON Lines)
        #[arg(long)]
        out: PathBuf,
        /// Sidecar path (default: <out>.truth.json)
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Seed for the built-in spec (ignored when --spec is given)
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Version registry JSON (default: the embedded DSM registry)
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Print tokens, tags, marker hits, readability, and primary verbs of
    /// one sentence
    Inspect {
        sentence: String,
        #[command(flatten)]
        overrides: ConfigOverrides,
    },
}

fn read_registry(path: &Option<PathBuf>) -> Result<VersionRegistry> {
    match path {
        Some(p) => {
            let json =
                fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            Ok(VersionRegistry::from_json(&json)?)
        }
        None => Ok(VersionRegistry::dsm_default()),
    }
}

fn open_corpus(config: &AnalysisConfig) -> Result<BufReader<fs::File>> {
    let path = config
        .corpus
        .as_ref()
        .ok_or_else(|| anyhow!("no corpus given; pass --corpus or set it in the config"))?;
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn cmd_validate(overrides: &ConfigOverrides) -> Result<ExitCode> {
    let config = overrides.resolve()?;
    let reader = open_corpus(&config)?;
    let violations = validate_corpus(reader)?;
    for v in &violations {
        println!("line {} doc {}: {}", v.line, v.doc_id, v.violation);
    }
    if violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} violation(s)", violations.len());
        Ok(ExitCode::from(1))
    }
}

fn cmd_analyze(overrides: &ConfigOverrides) -> Result<ExitCode> {
    let config = overrides.resolve()?;
    let out_dir = config
        .out
        .clone()
        .ok_or_else(|| anyhow!("no output directory given; pass --out or set it in the config"))?;
    let pipeline = Pipeline::from_config(&config)?;
    let reader = open_corpus(&config)?;

    let analysis = analyze_corpus(reader, &pipeline, config.workers)?;
    let bundle = build_reports(&analysis, &pipeline, &config);
    let citances_out = config
        .emit_citances
        .as_deref()
        .map(|p| (p, analysis.citances.as_slice()));
    write_reports(&out_dir, &bundle, citances_out)?;

    if analysis.invalid_docs > 0 {
        eprintln!(
            "skipped {} invalid document(s) of {}",
            analysis.invalid_docs, analysis.total_docs
        );
    }
    eprintln!(
        "{} documents, {} citances, {} anchors skipped; reports in {}",
        analysis.total_docs,
        analysis.citances.len(),
        analysis.extraction.skipped_anchors,
        out_dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_synth(
    spec_path: &Option<PathBuf>,
    out: &Path,
    sidecar: &Option<PathBuf>,
    seed: u64,
    registry_path: &Option<PathBuf>,
) -> Result<ExitCode> {
    let registry = read_registry(registry_path)?;
    let spec = match spec_path {
        Some(p) => {
            let json =
                fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            SynthSpec::from_json(&json)?
        }
        None => SynthSpec::demo(seed, 1000, 10_000),
    };
    let (documents, truth) = generate(&spec, &registry)?;

    let sidecar_path = sidecar
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.truth.json", out.display())));
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let tmp = out.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, corpus_to_jsonl(&documents))?;
    fs::rename(&tmp, out)?;
    let tmp = sidecar_path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, serde_json::to_string_pretty(&truth)?)?;
    fs::rename(&tmp, &sidecar_path)?;

    eprintln!(
        "{} documents, {} buckets; corpus at {}, truth at {}",
        documents.len(),
        truth.buckets.len(),
        out.display(),
        sidecar_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_inspect(sentence: &str, overrides: &ConfigOverrides) -> Result<ExitCode> {
    if sentence.trim().is_empty() {
        eprintln!("empty input");
        return Ok(ExitCode::from(1));
    }
    let config = overrides.resolve()?;
    let pipeline = Pipeline::from_config(&config)?;

    let features = compute_features(sentence, &pipeline.lexicon, &pipeline.tagger, None);
    let tokens: Vec<String> = citance_core::tokens::tagging_tokens(sentence)
        .into_iter()
        .map(|t| t.text)
        .collect();
    let tagged = pipeline.tagger.tag(&tokens);

    println!("tokens:");
    for t in &tagged {
        println!("  {}\t{}", t.token, t.tag);
    }
    println!("markers:");
    for cat in MarkerCategory::ALL {
        println!(
            "  {}\thit={}\tcount={}",
            cat.key(),
            features.markers.is_hit(cat),
            features.markers.count.get(&cat).copied().unwrap_or(0)
        );
    }
    println!("words: {}", features.word_count);
    println!("syllables: {}", features.syllable_count);
    println!("flesch: {}", features.flesch);
    println!("primary verbs: {}", features.primary_verbs.join(", "));
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Validate { overrides } => cmd_validate(overrides),
        Command::Analyze { overrides } => cmd_analyze(overrides),
        Command::Synth {
            spec,
            out,
            sidecar,
            seed,
            registry,
        } => cmd_synth(spec, out, sidecar, *seed, registry),
        Command::Inspect {
            sentence,
            overrides,
        } => cmd_inspect(sentence, overrides),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
