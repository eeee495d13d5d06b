//! Primary-verb extraction, lemmatization, and ranked verb profiles.
//!
//! A primary verb is a finite verb of the sentence's main clause. Main-clause
//! membership is approximated with a flat clause-depth scan: subordinator and
//! relativizer tokens and opening parentheses push depth, closing parentheses
//! pop it, and only verb groups starting at depth zero count. Within a verb
//! group (auxiliary chain plus head), the lexical head carries the primary
//! status, so "were made" yields "make" and "can be used" yields "use".
//!
//! Lemmatization is an irregular-form table, then suffix rules gated by a
//! known-lemma list for silent-e restoration and consonant undoubling.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::citance::Citance;
use crate::stats::{average_ranks_desc, spearman_rho, CorrelationResult, StatsError};
use crate::tagger::TaggedToken;

/// Tokens that open a subordinate or relative clause.
pub const SUBORDINATORS: &[&str] = &[
    "that", "which", "who", "whom", "whose", "because", "although", "though", "if", "when",
    "while", "since", "as", "whereas", "unless", "after", "before",
];

const FINITE_TAGS: &[&str] = &["VBD", "VBZ", "VBP"];
const VERB_TAGS: &[&str] = &["VB", "VBD", "VBZ", "VBP", "VBG", "VBN", "MD"];

const BE_FORMS: &[&str] = &["be", "is", "are", "was", "were", "am", "been", "being"];
const HAVE_FORMS: &[&str] = &["have", "has", "had", "having"];
const DO_FORMS: &[&str] = &["do", "does", "did"];

fn is_verb_tag(tag: &str) -> bool {
    VERB_TAGS.contains(&tag)
}

/// May `next_tag` extend a verb group whose last verb is `prev`?
fn extends_group(prev: &TaggedToken, next_tag: &str) -> bool {
    let w = prev.token.as_str();
    if BE_FORMS.contains(&w) {
        return next_tag == "VBG" || next_tag == "VBN";
    }
    if HAVE_FORMS.contains(&w) {
        return next_tag == "VBN";
    }
    if DO_FORMS.contains(&w) {
        return next_tag == "VB";
    }
    if prev.tag == "MD" {
        return next_tag == "VB";
    }
    false
}

/// Extract the primary-verb lemmas of a tagged sentence, in order. Ill-formed
/// sentences simply yield an empty list.
pub fn extract_primary_verbs(tagged: &[TaggedToken]) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth: usize = 0;
    let mut i = 0;
    while i < tagged.len() {
        let tok = &tagged[i];
        if tok.token == "(" {
            depth += 1;
            i += 1;
            continue;
        }
        if tok.token == ")" {
            depth = depth.saturating_sub(1);
            i += 1;
            continue;
        }
        if SUBORDINATORS.contains(&tok.token.as_str()) {
            depth += 1;
            i += 1;
            continue;
        }
        if depth == 0 && is_verb_tag(&tok.tag) {
            // collect the verb group: auxiliary chain plus lexical head,
            // skipping adverbs between elements
            let mut last = i;
            let mut j = i + 1;
            while j < tagged.len() {
                let t = &tagged[j];
                if t.tag == "RB" {
                    j += 1;
                    continue;
                }
                if is_verb_tag(&t.tag) && extends_group(&tagged[last], &t.tag) {
                    last = j;
                    j += 1;
                    continue;
                }
                break;
            }
            let first = &tagged[i];
            let head = &tagged[last];
            let finite =
                FINITE_TAGS.contains(&first.tag.as_str()) || (first.tag == "MD" && last > i);
            if finite {
                out.push(lemmatize_verb(&head.token, &head.tag));
            }
            i = last + 1;
            continue;
        }
        i += 1;
    }
    out
}

/// Irregular form to lemma table, consulted before any suffix rule.
const IRREGULARS: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("be", "be"),
    ("been", "be"),
    ("being", "be"),
    ("is", "be"),
    ("was", "be"),
    ("were", "be"),
    ("had", "have"),
    ("has", "have"),
    ("have", "have"),
    ("having", "have"),
    ("did", "do"),
    ("does", "do"),
    ("done", "do"),
    ("doing", "do"),
    ("became", "become"),
    ("began", "begin"),
    ("begun", "begin"),
    ("bought", "buy"),
    ("brought", "bring"),
    ("built", "build"),
    ("came", "come"),
    ("can't", "can"),
    ("cannot", "can"),
    ("caught", "catch"),
    ("chose", "choose"),
    ("chosen", "choose"),
    ("controlled", "control"),
    ("controlling", "control"),
    ("dealt", "deal"),
    ("drawn", "draw"),
    ("drew", "draw"),
    ("fell", "fall"),
    ("fallen", "fall"),
    ("felt", "feel"),
    ("found", "find"),
    ("gave", "give"),
    ("given", "give"),
    ("gone", "go"),
    ("got", "get"),
    ("gotten", "get"),
    ("grew", "grow"),
    ("grown", "grow"),
    ("held", "hold"),
    ("kept", "keep"),
    ("knew", "know"),
    ("known", "know"),
    ("labelled", "label"),
    ("labelling", "label"),
    ("led", "lead"),
    ("left", "leave"),
    ("lost", "lose"),
    ("made", "make"),
    ("meant", "mean"),
    ("met", "meet"),
    ("modelled", "model"),
    ("modelling", "model"),
    ("paid", "pay"),
    ("ran", "run"),
    ("rose", "rise"),
    ("risen", "rise"),
    ("said", "say"),
    ("sat", "sit"),
    ("saw", "see"),
    ("seen", "see"),
    ("sent", "send"),
    ("showed", "show"),
    ("shown", "show"),
    ("sought", "seek"),
    ("spent", "spend"),
    ("stood", "stand"),
    ("taken", "take"),
    ("taught", "teach"),
    ("thought", "think"),
    ("threw", "throw"),
    ("thrown", "throw"),
    ("told", "tell"),
    ("took", "take"),
    ("underwent", "undergo"),
    ("understood", "understand"),
    ("undertaken", "undertake"),
    ("undertook", "undertake"),
    ("went", "go"),
    ("won", "win"),
    ("wore", "wear"),
    ("worn", "wear"),
    ("wrote", "write"),
    ("written", "write"),
    ("won't", "will"),
];

/// Lemma dictionary used to decide between bare stems, silent-e restoration,
/// and consonant undoubling after suffix stripping.
const KNOWN_LEMMAS: &[&str] = &[
    "accept",
    "access",
    "account",
    "achieve",
    "acknowledge",
    "acquire",
    "adapt",
    "add",
    "address",
    "adjust",
    "administer",
    "adopt",
    "affect",
    "agree",
    "aim",
    "allocate",
    "allow",
    "alter",
    "analyze",
    "appear",
    "apply",
    "approach",
    "approve",
    "argue",
    "arise",
    "assess",
    "assign",
    "associate",
    "assume",
    "attempt",
    "attend",
    "attribute",
    "average",
    "avoid",
    "base",
    "behave",
    "believe",
    "benefit",
    "bias",
    "calculate",
    "calibrate",
    "capture",
    "carry",
    "categorize",
    "cause",
    "change",
    "characterize",
    "cite",
    "claim",
    "classify",
    "code",
    "collapse",
    "collect",
    "combine",
    "compare",
    "compile",
    "complete",
    "comprise",
    "compute",
    "conclude",
    "conduct",
    "confirm",
    "conform",
    "consider",
    "consist",
    "constitute",
    "construct",
    "contain",
    "continue",
    "contrast",
    "contribute",
    "control",
    "convert",
    "correlate",
    "correspond",
    "count",
    "cover",
    "create",
    "decide",
    "decline",
    "decrease",
    "define",
    "demonstrate",
    "depend",
    "derive",
    "describe",
    "design",
    "detect",
    "determine",
    "develop",
    "deviate",
    "diagnose",
    "differ",
    "differentiate",
    "discuss",
    "display",
    "distinguish",
    "divide",
    "document",
    "dominate",
    "drop",
    "elicit",
    "emerge",
    "emphasize",
    "employ",
    "enable",
    "encode",
    "encounter",
    "endorse",
    "engage",
    "enhance",
    "enroll",
    "ensure",
    "enter",
    "establish",
    "estimate",
    "evaluate",
    "examine",
    "exceed",
    "exclude",
    "exhibit",
    "expand",
    "expect",
    "explain",
    "explore",
    "express",
    "extend",
    "extract",
    "facilitate",
    "fail",
    "fall",
    "favor",
    "fit",
    "focus",
    "follow",
    "form",
    "formulate",
    "gather",
    "generate",
    "govern",
    "group",
    "handle",
    "highlight",
    "hold",
    "hypothesize",
    "identify",
    "illustrate",
    "imply",
    "improve",
    "include",
    "incorporate",
    "increase",
    "indicate",
    "infer",
    "influence",
    "inform",
    "integrate",
    "intend",
    "interpret",
    "interview",
    "introduce",
    "investigate",
    "involve",
    "judge",
    "justify",
    "label",
    "lack",
    "lead",
    "limit",
    "link",
    "list",
    "load",
    "locate",
    "maintain",
    "manage",
    "map",
    "match",
    "mean",
    "measure",
    "mediate",
    "meet",
    "mention",
    "merge",
    "model",
    "moderate",
    "modify",
    "monitor",
    "note",
    "observe",
    "obtain",
    "occur",
    "offer",
    "operate",
    "order",
    "organize",
    "outline",
    "overlap",
    "perform",
    "permit",
    "persist",
    "plan",
    "point",
    "predict",
    "prefer",
    "prepare",
    "present",
    "preserve",
    "process",
    "produce",
    "propose",
    "provide",
    "publish",
    "qualify",
    "quantify",
    "question",
    "rank",
    "rate",
    "reach",
    "recall",
    "receive",
    "recode",
    "recommend",
    "record",
    "recruit",
    "reduce",
    "refer",
    "refine",
    "reflect",
    "regard",
    "register",
    "regress",
    "relate",
    "remain",
    "remove",
    "repeat",
    "replace",
    "replicate",
    "report",
    "represent",
    "reproduce",
    "require",
    "resolve",
    "respond",
    "restrict",
    "result",
    "retain",
    "retrieve",
    "reveal",
    "review",
    "revise",
    "sample",
    "satisfy",
    "score",
    "screen",
    "select",
    "separate",
    "serve",
    "set",
    "shape",
    "share",
    "shift",
    "show",
    "simulate",
    "solve",
    "specify",
    "split",
    "standardize",
    "state",
    "stem",
    "store",
    "stratify",
    "stress",
    "structure",
    "study",
    "submit",
    "suggest",
    "summarize",
    "supplement",
    "support",
    "suppose",
    "survey",
    "sustain",
    "tend",
    "test",
    "train",
    "transform",
    "translate",
    "treat",
    "trim",
    "underlie",
    "use",
    "validate",
    "value",
    "vary",
    "verify",
    "view",
    "warrant",
    "weight",
    "withdraw",
    "yield",
];

fn known_lemma(s: &str) -> bool {
    KNOWN_LEMMAS.binary_search(&s).is_ok()
}

fn undouble(stem: &str) -> Option<String> {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if n >= 3 && chars[n - 1] == chars[n - 2] && !"aeiouy".contains(chars[n - 1]) {
        let c = chars[n - 1];
        if c != 'l' && c != 's' && c != 'f' && c != 'z' {
            return Some(chars[..n - 1].iter().collect());
        }
    }
    None
}

/// Resolve a stripped stem to a lemma: bare stem, undoubled stem, or stem
/// with a restored silent "e", whichever the lemma dictionary confirms first.
fn fix_stem(stem: &str) -> String {
    if known_lemma(stem) {
        return stem.to_string();
    }
    if let Some(u) = undouble(stem) {
        if known_lemma(&u) {
            return u;
        }
    }
    let with_e = format!("{stem}e");
    if known_lemma(&with_e) {
        return with_e;
    }
    // unknown vocabulary: undouble obvious doubling, restore e after the
    // letters that essentially never end an English verb stem bare
    if let Some(u) = undouble(stem) {
        return u;
    }
    if stem.ends_with(['v', 'z', 'u', 'c']) {
        return with_e;
    }
    stem.to_string()
}

/// Lemmatize a verb-tagged token: irregular table first, then tag-aware
/// suffix rules.
pub fn lemmatize_verb(token: &str, tag: &str) -> String {
    if let Some((_, lemma)) = IRREGULARS.iter().find(|(form, _)| *form == token) {
        return (*lemma).to_string();
    }
    let n = token.chars().count();
    match tag {
        "VBZ" => {
            if token.ends_with("ies") && n >= 5 {
                return format!("{}y", &token[..token.len() - 3]);
            }
            for suf in ["sses", "shes", "ches", "xes", "zes", "oes"] {
                if token.ends_with(suf) {
                    return token[..token.len() - 2].to_string();
                }
            }
            if token.ends_with('s') && !token.ends_with("ss") && n >= 3 {
                return token[..token.len() - 1].to_string();
            }
            token.to_string()
        }
        "VBD" | "VBN" => {
            if token.ends_with("ied") && n >= 5 {
                return format!("{}y", &token[..token.len() - 3]);
            }
            if token.ends_with("eed") && n >= 5 {
                return token[..token.len() - 1].to_string();
            }
            if token.ends_with("ed") && n >= 4 {
                return fix_stem(&token[..token.len() - 2]);
            }
            token.to_string()
        }
        "VBG" => {
            if token.ends_with("ing") && n >= 5 {
                return fix_stem(&token[..token.len() - 3]);
            }
            token.to_string()
        }
        _ => token.to_string(),
    }
}

/// Ranked lemma-frequency table for one citance population.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerbProfile {
    pub population: String,
    pub freq: BTreeMap<String, u64>,
    /// Lemmas with count >= min_count, stopverbs removed, ordered by
    /// descending count then lexicographically.
    pub candidate_set: Vec<String>,
    /// Average rank of each candidate (ties share the mean positional rank).
    pub ranks: BTreeMap<String, f64>,
}

impl VerbProfile {
    /// Build a profile from raw lemma counts.
    pub fn from_counts(
        population: impl Into<String>,
        freq: BTreeMap<String, u64>,
        min_count: u64,
        stopverbs: &[String],
    ) -> Self {
        let mut candidate_set: Vec<String> = freq
            .iter()
            .filter(|(lemma, count)| **count >= min_count && !stopverbs.iter().any(|s| s == *lemma))
            .map(|(lemma, _)| lemma.clone())
            .collect();
        candidate_set.sort_by(|a, b| freq[b].cmp(&freq[a]).then(a.cmp(b)));

        let counts: Vec<f64> = candidate_set.iter().map(|l| freq[l] as f64).collect();
        let rank_values = average_ranks_desc(&counts);
        let ranks = candidate_set
            .iter()
            .cloned()
            .zip(rank_values)
            .collect::<BTreeMap<_, _>>();

        VerbProfile {
            population: population.into(),
            freq,
            candidate_set,
            ranks,
        }
    }

    pub fn count(&self, lemma: &str) -> u64 {
        self.freq.get(lemma).copied().unwrap_or(0)
    }
}

/// Aggregate primary-verb lemmas of a citance population into a profile.
pub fn build_verb_profile<'a>(
    citances: impl IntoIterator<Item = &'a Citance>,
    population: impl Into<String>,
    min_count: u64,
    stopverbs: &[String],
) -> VerbProfile {
    let mut freq: BTreeMap<String, u64> = BTreeMap::new();
    for c in citances {
        for lemma in &c.features.primary_verbs {
            *freq.entry(lemma.clone()).or_insert(0) += 1;
        }
    }
    VerbProfile::from_counts(population, freq, min_count, stopverbs)
}

/// First `k` candidates by descending count, ties broken lexicographically.
pub fn top_verbs(profile: &VerbProfile, k: usize) -> Vec<(String, u64)> {
    profile
        .candidate_set
        .iter()
        .take(k)
        .map(|l| (l.clone(), profile.freq[l]))
        .collect()
}

/// Tie-corrected Spearman rho between two profiles over a shared candidate
/// list; absent lemmas score frequency zero.
pub fn profile_correlation(
    a: &VerbProfile,
    b: &VerbProfile,
    candidates: &[String],
) -> Result<CorrelationResult, StatsError> {
    let fa: Vec<f64> = candidates.iter().map(|l| a.count(l) as f64).collect();
    let fb: Vec<f64> = candidates.iter().map(|l| b.count(l) as f64).collect();
    let rho = spearman_rho(&fa, &fb, (&a.population, &b.population))?;
    Ok(CorrelationResult {
        pair: (a.population.clone(), b.population.clone()),
        rho,
        n: candidates.len(),
    })
}
