//! Rule-based, abbreviation-aware sentence segmentation.
//!
//! A paragraph splits at '.', '?' or '!' followed by whitespace and then an
//! uppercase letter or digit. Three protected contexts never split: a
//! preceding abbreviation from the shipped list, a decimal number, and a
//! single capital initial ("K. Li"). Spans are code point offsets into the
//! paragraph, and concatenating the spans with the whitespace between them
//! reproduces the paragraph exactly.

/// Dot-terminated tokens that never end a sentence. Compared lowercase,
/// including the trailing dot; "al." covers "et al.".
pub const ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "al.", "cf.", "etc.", "vs.", "viz.", "fig.", "figs.", "eq.", "sec.", "dr.",
    "mr.", "mrs.", "ms.", "prof.", "st.", "jr.", "sr.", "no.", "vol.", "pp.", "p.", "ed.", "eds.",
    "ca.", "approx.", "resp.",
];

/// One sentence span within a paragraph; offsets are code point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceSpan {
    pub text: String,
    pub char_start: usize,
    pub char_end: usize,
}

fn token_before_dot(chars: &[char], dot: usize) -> String {
    let mut start = dot;
    while start > 0 && !chars[start - 1].is_whitespace() {
        start -= 1;
    }
    // drop leading punctuation such as '(' in "(e.g."
    let mut tok: &[char] = &chars[start..=dot];
    while let Some((first, rest)) = tok.split_first() {
        if first.is_alphanumeric() {
            break;
        }
        tok = rest;
    }
    tok.iter().flat_map(|c| c.to_lowercase()).collect()
}

fn is_protected_dot(chars: &[char], dot: usize) -> bool {
    // decimal number: digit on both sides
    if dot > 0
        && dot + 1 < chars.len()
        && chars[dot - 1].is_ascii_digit()
        && chars[dot + 1].is_ascii_digit()
    {
        return true;
    }
    let token = token_before_dot(chars, dot);
    if ABBREVIATIONS.contains(&token.as_str()) {
        return true;
    }
    // single capital initial: exactly one letter before the dot
    if token.chars().count() == 2 && token.ends_with('.') {
        let first_original = chars[dot - 1];
        if first_original.is_alphabetic() && first_original.is_uppercase() {
            return true;
        }
    }
    false
}

fn splits_here(chars: &[char], i: usize) -> bool {
    let c = chars[i];
    if c != '.' && c != '?' && c != '!' {
        return false;
    }
    // require whitespace, then an uppercase letter or digit
    let mut j = i + 1;
    if j >= chars.len() || !chars[j].is_whitespace() {
        return false;
    }
    while j < chars.len() && chars[j].is_whitespace() {
        j += 1;
    }
    if j >= chars.len() {
        return false;
    }
    if !(chars[j].is_uppercase() || chars[j].is_ascii_digit()) {
        return false;
    }
    if c == '.' && is_protected_dot(chars, i) {
        return false;
    }
    true
}

/// Split a paragraph into sentence spans. Empty and all-whitespace input
/// yields no spans.
pub fn segment_sentences(paragraph: &str) -> Vec<SentenceSpan> {
    let chars: Vec<char> = paragraph.chars().collect();
    let mut spans = Vec::new();
    let mut i = 0;
    let n = chars.len();

    while i < n {
        // skip separator whitespace
        while i < n && chars[i].is_whitespace() {
            i += 1;
        }
        if i >= n {
            break;
        }
        let start = i;
        let mut end = None;
        while i < n {
            if splits_here(&chars, i) {
                end = Some(i + 1);
                i += 1;
                break;
            }
            i += 1;
        }
        // unterminated tail: close at the last non-whitespace character
        let end = end.unwrap_or_else(|| {
            let mut e = n;
            while e > start && chars[e - 1].is_whitespace() {
                e -= 1;
            }
            e
        });
        if end > start {
            spans.push(SentenceSpan {
                text: chars[start..end].iter().collect(),
                char_start: start,
                char_end: end,
            });
        }
    }
    spans
}

/// The sentence span containing code point offset `pos`, if any.
pub fn sentence_at(spans: &[SentenceSpan], pos: usize) -> Option<&SentenceSpan> {
    spans
        .iter()
        .find(|s| s.char_start <= pos && pos < s.char_end)
}
