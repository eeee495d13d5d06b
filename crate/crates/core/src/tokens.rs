//! Word tokenization shared by the marker matcher, the readability scorer,
//! and the part-of-speech path.
//!
//! A word token is a maximal run of letters and digits, possibly joined by
//! internal apostrophes or hyphens ("don't", "dsm-iv"). Everything is
//! lowercased and punctuation is dropped. The tagging variant additionally
//! keeps parentheses as standalone tokens because the main-clause scan treats
//! parenthesized material as subordinate.
//!
//! Offsets are Unicode code point indices into the source text, matching the
//! anchor-span convention of the corpus format.

/// One token with its half-open `[start, end)` code point span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

impl Token {
    fn new(text: String, start: usize, end: usize) -> Self {
        Token { text, start, end }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_joiner(c: char) -> bool {
    c == '\'' || c == '\u{2019}' || c == '-'
}

fn scan(text: &str, keep_parens: bool) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if keep_parens && (c == '(' || c == ')') {
            out.push(Token::new(c.to_string(), i, i + 1));
            i += 1;
        } else if is_word_char(c) {
            let start = i;
            let mut buf = String::new();
            while i < chars.len() {
                if is_word_char(chars[i]) {
                    buf.extend(chars[i].to_lowercase());
                    i += 1;
                } else if is_joiner(chars[i])
                    && i + 1 < chars.len()
                    && is_word_char(chars[i + 1])
                    && i > start
                {
                    // joiner counts only between word characters
                    buf.push(if chars[i] == '\u{2019}' {
                        '\''
                    } else {
                        chars[i]
                    });
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Token::new(buf, start, i));
        } else {
            i += 1;
        }
    }
    out
}

/// Word tokens only: the tokenization used for marker matching and
/// readability. Punctuation (including parentheses) is dropped.
pub fn word_tokens(text: &str) -> Vec<Token> {
    scan(text, false)
}

/// Word tokens plus `(` / `)` tokens, for the tagging and clause-depth path.
pub fn tagging_tokens(text: &str) -> Vec<Token> {
    scan(text, true)
}

/// Convenience: just the token strings.
pub fn words(text: &str) -> Vec<String> {
    word_tokens(text).into_iter().map(|t| t.text).collect()
}
