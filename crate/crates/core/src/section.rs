//! Method / non-Method section classification.
//!
//! A title is Method-bearing iff its token set intersects the include terms
//! and avoids the exclude terms, with exclusion winning when both hit. Tokens
//! are maximal alphanumeric runs, lowercased, so "2.1 Methods" and "Method:"
//! classify the same as their bare forms. Matching is token-level rather than
//! substring-level: "experimental" must pass while "experiment" blocks, and
//! no substring rule can express both.
//!
//! Method status propagates down the section tree: every descendant of a
//! Method section is Method, and a Method section may sit under a non-Method
//! parent ("Experiment 1" > "Method").

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{flatten_sections, CorpusError, Document};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionKind {
    Method,
    NonMethod,
}

impl SectionKind {
    pub fn is_method(self) -> bool {
        matches!(self, SectionKind::Method)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SectionKind::Method => "method",
            SectionKind::NonMethod => "non_method",
        }
    }
}

/// Include/exclude token sets for title classification. The defaults encode
/// the standard criteria; both sets are configurable because keyword choices
/// are study decisions.
#[derive(Debug, Clone)]
pub struct TitleRuleSet {
    include_terms: HashSet<String>,
    exclude_terms: HashSet<String>,
}

impl Default for TitleRuleSet {
    fn default() -> Self {
        TitleRuleSet::new(
            [
                "experimental",
                "methodology",
                "methodologies",
                "method",
                "methods",
            ]
            .iter()
            .map(|s| s.to_string()),
            ["experiment", "experiments"].iter().map(|s| s.to_string()),
        )
    }
}

impl TitleRuleSet {
    /// Build a rule set; exclude terms are removed from the include set so
    /// the two stay disjoint and exclusion dominance is structural.
    pub fn new(
        include: impl IntoIterator<Item = String>,
        exclude: impl IntoIterator<Item = String>,
    ) -> Self {
        let exclude_terms: HashSet<String> =
            exclude.into_iter().map(|s| s.to_lowercase()).collect();
        let include_terms = include
            .into_iter()
            .map(|s| s.to_lowercase())
            .filter(|t| !exclude_terms.contains(t))
            .collect();
        TitleRuleSet {
            include_terms,
            exclude_terms,
        }
    }
}

/// Title tokens: maximal alphanumeric runs, lowercased.
fn title_tokens(title: &str) -> Vec<String> {
    title
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// True iff the title is Method-bearing under the rule set.
pub fn classify_title(title: &str, rules: &TitleRuleSet) -> bool {
    let tokens = title_tokens(title);
    let excluded = tokens.iter().any(|t| rules.exclude_terms.contains(t));
    let included = tokens.iter().any(|t| rules.include_terms.contains(t));
    included && !excluded
}

/// Classify every section of a document. A section is Method iff its own
/// title is Method-bearing or any ancestor's is.
pub fn classify_sections(
    doc: &Document,
    rules: &TitleRuleSet,
) -> Result<HashMap<String, SectionKind>, CorpusError> {
    let flat = flatten_sections(doc)?;
    let mut kinds: HashMap<String, SectionKind> = HashMap::with_capacity(flat.len());
    for entry in &flat {
        let own = classify_title(&entry.node.title, rules);
        let inherited = entry
            .ancestor_ids
            .iter()
            .any(|a| kinds.get(a).is_some_and(|k| k.is_method()));
        kinds.insert(
            entry.node.section_id.clone(),
            if own || inherited {
                SectionKind::Method
            } else {
                SectionKind::NonMethod
            },
        );
    }
    Ok(kinds)
}

/// Corpus-level Method coverage: how many papers have at least one Method
/// section, how many Method-bearing titles occur, and the per-title tallies.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MethodCoverage {
    pub methodful_paper_count: u64,
    pub method_section_instances: u64,
    pub per_title_counts: BTreeMap<String, u64>,
}

impl MethodCoverage {
    /// Fold one document in. Instances and per-title counts consider only
    /// sections whose own title is Method-bearing; subsections that merely
    /// inherit Method status do not add title instances.
    pub fn add_document(&mut self, doc: &Document, rules: &TitleRuleSet) {
        let mut any_method = false;
        for sec in &doc.sections {
            if classify_title(&sec.title, rules) {
                any_method = true;
                self.method_section_instances += 1;
                *self
                    .per_title_counts
                    .entry(sec.title.to_lowercase())
                    .or_insert(0) += 1;
            }
        }
        // a document whose Method sections are all inherited cannot exist:
        // inheritance starts from some Method-bearing title
        if any_method {
            self.methodful_paper_count += 1;
        }
    }

    pub fn merge(&mut self, other: &MethodCoverage) {
        self.methodful_paper_count += other.methodful_paper_count;
        self.method_section_instances += other.method_section_instances;
        for (title, n) in &other.per_title_counts {
            *self.per_title_counts.entry(title.clone()).or_insert(0) += n;
        }
    }
}

/// Method coverage over a whole corpus.
pub fn method_coverage<'a>(
    docs: impl IntoIterator<Item = &'a Document>,
    rules: &TitleRuleSet,
) -> MethodCoverage {
    let mut cov = MethodCoverage::default();
    for doc in docs {
        cov.add_document(doc, rules);
    }
    cov
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SectionNode;

    fn doc_with_titles(specs: &[(&str, &str, Option<&str>)]) -> Document {
        Document {
            doc_id: "d".into(),
            publication_year: 2010,
            journal_id: "j".into(),
            sections: specs
                .iter()
                .map(|(id, title, parent)| SectionNode {
                    section_id: id.to_string(),
                    title: title.to_string(),
                    parent_id: parent.map(str::to_string),
                    paragraphs: vec![],
                    token_tags: None,
                })
                .collect(),
            references: vec![],
            anchors: vec![],
        }
    }

    #[test]
    fn include_terms_match() {
        let rules = TitleRuleSet::default();
        for title in [
            "Methods",
            "Method",
            "Methodology",
            "Methodologies",
            "Experimental",
        ] {
            assert!(classify_title(title, &rules), "{title} should be Method");
        }
    }

    #[test]
    fn exclude_terms_block() {
        let rules = TitleRuleSet::default();
        assert!(!classify_title("Experiment 2", &rules));
        assert!(!classify_title("Experiments", &rules));
    }

    #[test]
    fn exclusion_overrides_inclusion() {
        let rules = TitleRuleSet::default();
        assert!(!classify_title("Experiment 1: Method", &rules));
    }

    #[test]
    fn experimental_is_not_experiment() {
        let rules = TitleRuleSet::default();
        assert!(classify_title("Experimental procedure", &rules));
    }

    #[test]
    fn data_analysis_is_not_method() {
        let rules = TitleRuleSet::default();
        assert!(!classify_title("Data analysis", &rules));
    }

    #[test]
    fn punctuation_and_numbering_ignored() {
        let rules = TitleRuleSet::default();
        assert!(classify_title("2.1 Methods", &rules));
        assert!(classify_title("Method:", &rules));
    }

    #[test]
    fn case_insensitive() {
        let rules = TitleRuleSet::default();
        assert_eq!(
            classify_title("materials and methods", &rules),
            classify_title("MATERIALS AND METHODS", &rules)
        );
    }

    #[test]
    fn subsection_inherits_method() {
        let doc = doc_with_titles(&[
            ("e1", "Experiment 1", None),
            ("m", "Method", Some("e1")),
            ("p", "Participants", Some("m")),
        ]);
        let kinds = classify_sections(&doc, &TitleRuleSet::default()).unwrap();
        assert_eq!(kinds["e1"], SectionKind::NonMethod);
        assert_eq!(kinds["m"], SectionKind::Method);
        assert_eq!(kinds["p"], SectionKind::Method);
    }

    #[test]
    fn non_method_subtree_stays_non_method() {
        let doc = doc_with_titles(&[("d", "Discussion", None), ("l", "Limitations", Some("d"))]);
        let kinds = classify_sections(&doc, &TitleRuleSet::default()).unwrap();
        assert_eq!(kinds["d"], SectionKind::NonMethod);
        assert_eq!(kinds["l"], SectionKind::NonMethod);
    }

    #[test]
    fn coverage_counts_titles_not_inherited_sections() {
        let doc = doc_with_titles(&[("m", "Methods", None), ("p", "Participants", Some("m"))]);
        let other = doc_with_titles(&[("i", "Introduction", None)]);
        let cov = method_coverage([&doc, &other], &TitleRuleSet::default());
        assert_eq!(cov.methodful_paper_count, 1);
        assert_eq!(cov.method_section_instances, 1);
        assert_eq!(cov.per_title_counts["methods"], 1);
    }

    #[test]
    fn coverage_of_empty_corpus() {
        let cov = method_coverage(std::iter::empty::<&Document>(), &TitleRuleSet::default());
        assert_eq!(cov, MethodCoverage::default());
    }
}
