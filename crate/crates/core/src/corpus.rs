//! Normalized corpus schema: documents, sections, references, and citation
//! anchors, plus JSON Lines parsing and structural validation.
//!
//! Parsing and validation are deliberately separate: a record with a dangling
//! anchor still parses, and [`validate_document`] reports the problem as data
//! rather than a fault. Character offsets throughout the schema are Unicode
//! code point indices into the paragraph text.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;
use thiserror::Error;

/// One paper: section tree, reference list, and in-text citation anchors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub publication_year: i32,
    pub journal_id: String,
    pub sections: Vec<SectionNode>,
    pub references: Vec<ReferenceEntry>,
    pub anchors: Vec<CitationAnchor>,
}

/// A titled section holding ordered paragraphs. `parent_id`, when present,
/// must name a section that appears earlier in the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionNode {
    pub section_id: String,
    pub title: String,
    pub parent_id: Option<String>,
    pub paragraphs: Vec<String>,
    /// Optional pre-computed part-of-speech tags, one array per paragraph,
    /// one tag per tagging token of that paragraph.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub token_tags: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub ref_id: String,
    pub lead_contributor: String,
    pub year: i32,
    pub title: String,
}

/// A character-offset citation span inside one paragraph. The span is
/// `[char_start, char_end)` in code points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationAnchor {
    pub section_id: String,
    pub paragraph_index: usize,
    pub char_start: usize,
    pub char_end: usize,
    pub ref_ids: Vec<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("missing required field `{0}`")]
    MissingField(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("section tree is cyclic or out of order at `{0}`")]
    CyclicSectionTree(String),
}

/// Machine-readable violation codes emitted by [`validate_document`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationCode {
    EmptyDocId,
    DuplicateDocId,
    DuplicateSectionId,
    ParentNotFound,
    CyclicSection,
    DuplicateRefId,
    EmptyRefIds,
    AnchorUnknownSection,
    AnchorUnknownRef,
    AnchorBadParagraph,
    OutOfRangeAnchor,
    TokenTagsLength,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::EmptyDocId => "EMPTY_DOC_ID",
            ViolationCode::DuplicateDocId => "DUPLICATE_DOC_ID",
            ViolationCode::DuplicateSectionId => "DUPLICATE_SECTION_ID",
            ViolationCode::ParentNotFound => "PARENT_NOT_FOUND",
            ViolationCode::CyclicSection => "CYCLIC_SECTION",
            ViolationCode::DuplicateRefId => "DUPLICATE_REF_ID",
            ViolationCode::EmptyRefIds => "EMPTY_REF_IDS",
            ViolationCode::AnchorUnknownSection => "ANCHOR_UNKNOWN_SECTION",
            ViolationCode::AnchorUnknownRef => "ANCHOR_UNKNOWN_REF",
            ViolationCode::AnchorBadParagraph => "ANCHOR_BAD_PARAGRAPH",
            ViolationCode::OutOfRangeAnchor => "OUT_OF_RANGE_ANCHOR",
            ViolationCode::TokenTagsLength => "TOKEN_TAGS_LENGTH",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One invariant violation with the location it was observed at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub location: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.code.as_str(), self.location)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn field<'a>(
    obj: &'a serde_json::Map<String, Value>,
    key: &str,
    path: &str,
) -> Result<&'a Value, ParseError> {
    obj.get(key).ok_or_else(|| {
        if path.is_empty() {
            ParseError::MissingField(key.to_string())
        } else {
            ParseError::MissingField(format!("{path}.{key}"))
        }
    })
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<&'a serde_json::Map<String, Value>, ParseError> {
    v.as_object()
        .ok_or_else(|| ParseError::MalformedRecord(format!("`{path}` is not an object")))
}

fn as_str(v: &Value, path: &str) -> Result<String, ParseError> {
    v.as_str()
        .map(str::to_owned)
        .ok_or_else(|| ParseError::MalformedRecord(format!("`{path}` is not a string")))
}

fn as_year(v: &Value, path: &str) -> Result<i32, ParseError> {
    v.as_i64()
        .and_then(|n| i32::try_from(n).ok())
        .ok_or_else(|| ParseError::MalformedRecord(format!("`{path}` is not an integer year")))
}

fn as_index(v: &Value, path: &str) -> Result<usize, ParseError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| {
        ParseError::MalformedRecord(format!("`{path}` is not a non-negative integer"))
    })
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array()
        .ok_or_else(|| ParseError::MalformedRecord(format!("`{path}` is not an array")))
}

fn string_array(v: &Value, path: &str) -> Result<Vec<String>, ParseError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| as_str(s, &format!("{path}[{i}]")))
        .collect()
}

/// Parse one JSON Lines record into a [`Document`]. Unknown keys are ignored;
/// missing required keys and type mismatches are errors. Structural invariants
/// (anchor targets, parent ordering) are not checked here; see
/// [`validate_document`].
pub fn parse_document_record(line: &str) -> Result<Document, ParseError> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| ParseError::MalformedRecord(e.to_string()))?;
    let obj = as_obj(&value, "record")?;

    let doc_id = as_str(field(obj, "doc_id", "")?, "doc_id")?;
    let publication_year = as_year(field(obj, "publication_year", "")?, "publication_year")?;
    let journal_id = as_str(field(obj, "journal_id", "")?, "journal_id")?;

    let mut sections = Vec::new();
    for (i, sec) in as_array(field(obj, "sections", "")?, "sections")?
        .iter()
        .enumerate()
    {
        let path = format!("sections[{i}]");
        let sec = as_obj(sec, &path)?;
        let token_tags = match sec.get("token_tags") {
            None | Some(Value::Null) => None,
            Some(v) => {
                let outer = as_array(v, &format!("{path}.token_tags"))?;
                let mut per_para = Vec::with_capacity(outer.len());
                for (j, inner) in outer.iter().enumerate() {
                    per_para.push(string_array(inner, &format!("{path}.token_tags[{j}]"))?);
                }
                Some(per_para)
            }
        };
        let parent = field(sec, "parent_id", &path)?;
        sections.push(SectionNode {
            section_id: as_str(
                field(sec, "section_id", &path)?,
                &format!("{path}.section_id"),
            )?,
            title: as_str(field(sec, "title", &path)?, &format!("{path}.title"))?,
            parent_id: if parent.is_null() {
                None
            } else {
                Some(as_str(parent, &format!("{path}.parent_id"))?)
            },
            paragraphs: string_array(
                field(sec, "paragraphs", &path)?,
                &format!("{path}.paragraphs"),
            )?,
            token_tags,
        });
    }

    let mut references = Vec::new();
    for (i, re) in as_array(field(obj, "references", "")?, "references")?
        .iter()
        .enumerate()
    {
        let path = format!("references[{i}]");
        let re = as_obj(re, &path)?;
        references.push(ReferenceEntry {
            ref_id: as_str(field(re, "ref_id", &path)?, &format!("{path}.ref_id"))?,
            lead_contributor: as_str(
                field(re, "lead_contributor", &path)?,
                &format!("{path}.lead_contributor"),
            )?,
            year: as_year(field(re, "year", &path)?, &format!("{path}.year"))?,
            title: as_str(field(re, "title", &path)?, &format!("{path}.title"))?,
        });
    }

    let mut anchors = Vec::new();
    for (i, an) in as_array(field(obj, "anchors", "")?, "anchors")?
        .iter()
        .enumerate()
    {
        let path = format!("anchors[{i}]");
        let an = as_obj(an, &path)?;
        anchors.push(CitationAnchor {
            section_id: as_str(
                field(an, "section_id", &path)?,
                &format!("{path}.section_id"),
            )?,
            paragraph_index: as_index(
                field(an, "paragraph_index", &path)?,
                &format!("{path}.paragraph_index"),
            )?,
            char_start: as_index(
                field(an, "char_start", &path)?,
                &format!("{path}.char_start"),
            )?,
            char_end: as_index(field(an, "char_end", &path)?, &format!("{path}.char_end"))?,
            ref_ids: string_array(field(an, "ref_ids", &path)?, &format!("{path}.ref_ids"))?,
        });
    }

    Ok(Document {
        doc_id,
        publication_year,
        journal_id,
        sections,
        references,
        anchors,
    })
}

/// Serialize a document back to its single-line JSON record form.
pub fn serialize_document(doc: &Document) -> String {
    serde_json::to_string(doc).expect("document serialization cannot fail")
}

/// Check every structural invariant and report violations as data. A clean
/// report means the document is safe for every downstream operation.
pub fn validate_document(doc: &Document) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut push = |code, location: String| {
        report.violations.push(Violation { code, location });
    };

    if doc.doc_id.is_empty() {
        push(ViolationCode::EmptyDocId, "doc_id".to_string());
    }

    let mut seen_sections: Vec<&str> = Vec::with_capacity(doc.sections.len());
    for sec in &doc.sections {
        if seen_sections.contains(&sec.section_id.as_str()) {
            push(
                ViolationCode::DuplicateSectionId,
                format!("section `{}`", sec.section_id),
            );
        }
        if let Some(parent) = &sec.parent_id {
            if !doc.sections.iter().any(|s| &s.section_id == parent) {
                push(
                    ViolationCode::ParentNotFound,
                    format!("section `{}`", sec.section_id),
                );
            } else if !seen_sections.contains(&parent.as_str()) {
                // parent exists but not strictly earlier: self-reference or
                // forward reference, either of which breaks the tree order
                push(
                    ViolationCode::CyclicSection,
                    format!("section `{}`", sec.section_id),
                );
            }
        }
        if let Some(tags) = &sec.token_tags {
            if tags.len() != sec.paragraphs.len() {
                push(
                    ViolationCode::TokenTagsLength,
                    format!("section `{}`", sec.section_id),
                );
            }
        }
        seen_sections.push(&sec.section_id);
    }

    let mut seen_refs: Vec<&str> = Vec::with_capacity(doc.references.len());
    for re in &doc.references {
        if seen_refs.contains(&re.ref_id.as_str()) {
            push(
                ViolationCode::DuplicateRefId,
                format!("reference `{}`", re.ref_id),
            );
        }
        seen_refs.push(&re.ref_id);
    }

    for (i, an) in doc.anchors.iter().enumerate() {
        let loc = format!("anchor[{i}]");
        if an.ref_ids.is_empty() {
            push(ViolationCode::EmptyRefIds, loc.clone());
        }
        for rid in &an.ref_ids {
            if !doc.references.iter().any(|r| &r.ref_id == rid) {
                push(
                    ViolationCode::AnchorUnknownRef,
                    format!("{loc} ref `{rid}`"),
                );
            }
        }
        match doc.sections.iter().find(|s| s.section_id == an.section_id) {
            None => push(ViolationCode::AnchorUnknownSection, loc.clone()),
            Some(sec) => match sec.paragraphs.get(an.paragraph_index) {
                None => push(ViolationCode::AnchorBadParagraph, loc.clone()),
                Some(par) => {
                    let len = par.chars().count();
                    if an.char_end <= an.char_start || an.char_end > len {
                        push(ViolationCode::OutOfRangeAnchor, loc.clone());
                    }
                }
            },
        }
    }

    report
}

/// One section with its tree position resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatSection<'a> {
    pub node: &'a SectionNode,
    pub depth: usize,
    /// Ancestor section ids, root first.
    pub ancestor_ids: Vec<String>,
}

/// Sections in document order, each with depth and root-first ancestor list.
/// Errors if any parent chain is not strictly earlier in the document.
pub fn flatten_sections(doc: &Document) -> Result<Vec<FlatSection<'_>>, CorpusError> {
    let mut out: Vec<FlatSection> = Vec::with_capacity(doc.sections.len());
    for sec in &doc.sections {
        let (depth, ancestor_ids) = match &sec.parent_id {
            None => (0, Vec::new()),
            Some(parent) => {
                let parent_flat = out
                    .iter()
                    .find(|f| &f.node.section_id == parent)
                    .ok_or_else(|| CorpusError::CyclicSectionTree(sec.section_id.clone()))?;
                let mut anc = parent_flat.ancestor_ids.clone();
                anc.push(parent.clone());
                (parent_flat.depth + 1, anc)
            }
        };
        out.push(FlatSection {
            node: sec,
            depth,
            ancestor_ids,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_record() -> String {
        r#"{"doc_id":"d1","publication_year":2015,"journal_id":"j1",
            "sections":[{"section_id":"s1","title":"Introduction","parent_id":null,
                         "paragraphs":["One paragraph."]}],
            "references":[],"anchors":[]}"#
            .replace('\n', "")
    }

    #[test]
    fn minimal_record_parses() {
        let doc = parse_document_record(&minimal_record()).unwrap();
        assert_eq!(doc.doc_id, "d1");
        assert_eq!(doc.sections.len(), 1);
        assert!(doc.anchors.is_empty());
    }

    #[test]
    fn missing_year_is_missing_field() {
        let line =
            r#"{"doc_id":"d1","journal_id":"j1","sections":[],"references":[],"anchors":[]}"#;
        assert_eq!(
            parse_document_record(line),
            Err(ParseError::MissingField("publication_year".into()))
        );
    }

    #[test]
    fn syntax_error_is_malformed() {
        assert!(matches!(
            parse_document_record("{not json"),
            Err(ParseError::MalformedRecord(_))
        ));
    }

    #[test]
    fn unknown_fields_ignored() {
        let line = minimal_record().replace("\"doc_id\"", "\"future_key\":42,\"doc_id\"");
        assert!(parse_document_record(&line).is_ok());
    }

    #[test]
    fn anchor_to_unknown_section_parses_but_flags() {
        let line = r#"{"doc_id":"d1","publication_year":2015,"journal_id":"j1",
            "sections":[{"section_id":"s1","title":"Intro","parent_id":null,"paragraphs":["Text here."]}],
            "references":[{"ref_id":"r1","lead_contributor":"A","year":2000,"title":"T"}],
            "anchors":[{"section_id":"nope","paragraph_index":0,"char_start":0,"char_end":4,"ref_ids":["r1"]}]}"#
            .replace('\n', "");
        let doc = parse_document_record(&line).unwrap();
        let report = validate_document(&doc);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(
            report.violations[0].code,
            ViolationCode::AnchorUnknownSection
        );
    }

    #[test]
    fn well_formed_document_is_clean() {
        let doc = parse_document_record(&minimal_record()).unwrap();
        assert!(validate_document(&doc).is_clean());
    }

    #[test]
    fn anchor_past_paragraph_end_is_out_of_range() {
        let mut doc = parse_document_record(&minimal_record()).unwrap();
        doc.references.push(ReferenceEntry {
            ref_id: "r1".into(),
            lead_contributor: "A".into(),
            year: 2000,
            title: "T".into(),
        });
        doc.anchors.push(CitationAnchor {
            section_id: "s1".into(),
            paragraph_index: 0,
            char_start: 0,
            char_end: 10_000,
            ref_ids: vec!["r1".into()],
        });
        let report = validate_document(&doc);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].code, ViolationCode::OutOfRangeAnchor);
    }

    #[test]
    fn self_parent_is_cyclic() {
        let mut doc = parse_document_record(&minimal_record()).unwrap();
        doc.sections[0].parent_id = Some("s1".into());
        let report = validate_document(&doc);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].code, ViolationCode::CyclicSection);
        assert!(flatten_sections(&doc).is_err());
    }

    #[test]
    fn flatten_flat_document() {
        let mut doc = parse_document_record(&minimal_record()).unwrap();
        for id in ["s2", "s3"] {
            doc.sections.push(SectionNode {
                section_id: id.into(),
                title: "More".into(),
                parent_id: None,
                paragraphs: vec![],
                token_tags: None,
            });
        }
        let flat = flatten_sections(&doc).unwrap();
        assert_eq!(
            flat.iter().map(|f| f.depth).collect::<Vec<_>>(),
            vec![0, 0, 0]
        );
    }

    #[test]
    fn flatten_nested_chain() {
        let doc = Document {
            doc_id: "d".into(),
            publication_year: 2000,
            journal_id: "j".into(),
            sections: vec![
                SectionNode {
                    section_id: "e1".into(),
                    title: "Experiment 1".into(),
                    parent_id: None,
                    paragraphs: vec![],
                    token_tags: None,
                },
                SectionNode {
                    section_id: "m".into(),
                    title: "Method".into(),
                    parent_id: Some("e1".into()),
                    paragraphs: vec![],
                    token_tags: None,
                },
                SectionNode {
                    section_id: "p".into(),
                    title: "Participants".into(),
                    parent_id: Some("m".into()),
                    paragraphs: vec![],
                    token_tags: None,
                },
            ],
            references: vec![],
            anchors: vec![],
        };
        let flat = flatten_sections(&doc).unwrap();
        assert_eq!(
            flat.iter().map(|f| f.depth).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert_eq!(
            flat[2].ancestor_ids,
            vec!["e1".to_string(), "m".to_string()]
        );
    }

    #[test]
    fn flatten_empty_document() {
        let mut doc = parse_document_record(&minimal_record()).unwrap();
        doc.sections.clear();
        assert!(flatten_sections(&doc).unwrap().is_empty());
    }

    #[test]
    fn token_tags_length_mismatch_flagged() {
        let mut doc = parse_document_record(&minimal_record()).unwrap();
        doc.sections[0].token_tags = Some(vec![vec!["DT".into()], vec!["NN".into()]]);
        let report = validate_document(&doc);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].code, ViolationCode::TokenTagsLength);
    }

    #[test]
    fn roundtrip_identity() {
        let line = r#"{"doc_id":"d2","publication_year":2011,"journal_id":"jx",
            "sections":[{"section_id":"s1","title":"Méthode","parent_id":null,
                         "paragraphs":["Première phrase."],"token_tags":[["DT","NN"]]}],
            "references":[{"ref_id":"r1","lead_contributor":"Ann Author","year":1999,"title":"A title"}],
            "anchors":[{"section_id":"s1","paragraph_index":0,"char_start":0,"char_end":8,"ref_ids":["r1"]}]}"#
            .replace('\n', "");
        let doc = parse_document_record(&line).unwrap();
        let doc2 = parse_document_record(&serialize_document(&doc)).unwrap();
        assert_eq!(doc, doc2);
    }
}
