//! Averaged-perceptron part-of-speech tagger.
//!
//! The classic Collins-style averaged perceptron over local context features,
//! trained on the annotated sentences shipped under `data/` and frozen into a
//! JSON model file embedded in the crate. Tagging is fully deterministic:
//! unambiguous frequent words short-circuit through a tag dictionary, score
//! ties break lexicographically, and no randomness survives training.
//!
//! When a corpus record carries pre-computed `token_tags`, those are used
//! verbatim instead of the model (see [`tag_with_override`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SplitMix64;

/// One token with its part-of-speech tag (Penn Treebank tagset).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub token: String,
    pub tag: String,
}

#[derive(Debug, Error)]
pub enum TaggerError {
    #[error("cannot load tagger model: {0}")]
    ModelLoadFailure(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerceptronTagger {
    classes: Vec<String>,
    tag_dict: BTreeMap<String, String>,
    weights: BTreeMap<String, BTreeMap<String, f64>>,
}

const EMBEDDED_MODEL: &str = include_str!("../data/tagger_model.json");

const START: [&str; 2] = ["-START2-", "-START-"];
const END: [&str; 2] = ["-END-", "-END2-"];

fn normalize(word: &str) -> String {
    if word.len() == 4 && word.chars().all(|c| c.is_ascii_digit()) {
        "!year".to_string()
    } else if word.starts_with(|c: char| c.is_ascii_digit()) {
        "!digits".to_string()
    } else {
        word.to_string()
    }
}

fn suffix(word: &str, n: usize) -> String {
    let chars: Vec<char> = word.chars().collect();
    let start = chars.len().saturating_sub(n);
    chars[start..].iter().collect()
}

fn features(i: usize, word: &str, context: &[String], prev: &str, prev2: &str) -> Vec<String> {
    // context is padded by two slots on each side
    let ci = i + 2;
    let mut f = Vec::with_capacity(14);
    f.push("bias".to_string());
    f.push(format!("i suffix {}", suffix(word, 3)));
    f.push(format!("i pref1 {}", word.chars().next().unwrap_or(' ')));
    f.push(format!("i-1 tag {prev}"));
    f.push(format!("i-2 tag {prev2}"));
    f.push(format!("i-1 tag+i-2 tag {prev} {prev2}"));
    f.push(format!("i word {}", context[ci]));
    f.push(format!("i-1 tag+i word {prev} {}", context[ci]));
    f.push(format!("i-1 word {}", context[ci - 1]));
    f.push(format!("i-1 suffix {}", suffix(&context[ci - 1], 3)));
    f.push(format!("i-2 word {}", context[ci - 2]));
    f.push(format!("i+1 word {}", context[ci + 1]));
    f.push(format!("i+1 suffix {}", suffix(&context[ci + 1], 3)));
    f.push(format!("i+2 word {}", context[ci + 2]));
    f
}

fn make_context(tokens: &[String]) -> Vec<String> {
    let mut context = Vec::with_capacity(tokens.len() + 4);
    context.extend(START.iter().map(|s| s.to_string()));
    context.extend(tokens.iter().map(|t| normalize(t)));
    context.extend(END.iter().map(|s| s.to_string()));
    context
}

impl PerceptronTagger {
    /// Load the model shipped inside the crate.
    pub fn embedded() -> Self {
        serde_json::from_str(EMBEDDED_MODEL).expect("embedded tagger model is valid")
    }

    pub fn from_json(json: &str) -> Result<Self, TaggerError> {
        serde_json::from_str(json).map_err(|e| TaggerError::ModelLoadFailure(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization cannot fail")
    }

    fn predict(&self, feats: &[String]) -> String {
        let mut scores: BTreeMap<&str, f64> = BTreeMap::new();
        for feat in feats {
            if let Some(per_class) = self.weights.get(feat) {
                for (class, w) in per_class {
                    *scores.entry(class).or_insert(0.0) += w;
                }
            }
        }
        // highest score wins; ties break on the lexicographically larger tag
        scores
            .into_iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(b.0)))
            .map(|(c, _)| c.to_string())
            .unwrap_or_else(|| "NN".to_string())
    }

    fn tag_one(&self, i: usize, word: &str, context: &[String], prev: &str, prev2: &str) -> String {
        if word == "(" || word == ")" {
            return word.to_string();
        }
        if let Some(tag) = self.tag_dict.get(&normalize(word)) {
            return tag.clone();
        }
        self.predict(&features(i, &normalize(word), context, prev, prev2))
    }

    /// Tag a token sequence (lowercase word tokens, parentheses allowed).
    pub fn tag(&self, tokens: &[String]) -> Vec<TaggedToken> {
        let context = make_context(tokens);
        let mut prev = START[1].to_string();
        let mut prev2 = START[0].to_string();
        let mut out = Vec::with_capacity(tokens.len());
        for (i, token) in tokens.iter().enumerate() {
            let tag = self.tag_one(i, token, &context, &prev, &prev2);
            out.push(TaggedToken {
                token: token.clone(),
                tag: tag.clone(),
            });
            prev2 = std::mem::replace(&mut prev, tag);
        }
        out
    }
}

/// Tag with optional pre-computed tags: when `pre_tags` is present and aligns
/// one-to-one with the tokens, it is echoed verbatim; otherwise the model runs.
pub fn tag_with_override(
    tagger: &PerceptronTagger,
    tokens: &[String],
    pre_tags: Option<&[String]>,
) -> Vec<TaggedToken> {
    if let Some(tags) = pre_tags {
        if tags.len() == tokens.len() {
            return tokens
                .iter()
                .zip(tags)
                .map(|(t, g)| TaggedToken {
                    token: t.clone(),
                    tag: g.clone(),
                })
                .collect();
        }
    }
    tagger.tag(tokens)
}

/// Training-only state: accumulators for weight averaging.
#[derive(Default)]
struct TrainState {
    weights: BTreeMap<String, BTreeMap<String, f64>>,
    totals: BTreeMap<(String, String), f64>,
    stamps: BTreeMap<(String, String), u64>,
    instances: u64,
}

impl TrainState {
    fn update_feat(&mut self, feat: &str, class: &str, delta: f64) {
        let key = (feat.to_string(), class.to_string());
        let w = self
            .weights
            .entry(feat.to_string())
            .or_default()
            .entry(class.to_string())
            .or_insert(0.0);
        let stamp = self.stamps.entry(key.clone()).or_insert(0);
        let total = self.totals.entry(key).or_insert(0.0);
        *total += (self.instances - *stamp) as f64 * *w;
        *stamp = self.instances;
        *w += delta;
    }

    fn update(&mut self, truth: &str, guess: &str, feats: &[String]) {
        self.instances += 1;
        if truth == guess {
            return;
        }
        for f in feats {
            self.update_feat(f, truth, 1.0);
            self.update_feat(f, guess, -1.0);
        }
    }

    fn averaged(mut self) -> BTreeMap<String, BTreeMap<String, f64>> {
        let mut out: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        for (feat, per_class) in &self.weights {
            for (class, w) in per_class {
                let key = (feat.clone(), class.clone());
                let stamp = self.stamps.get(&key).copied().unwrap_or(0);
                let total = self.totals.entry(key).or_insert(0.0);
                *total += (self.instances - stamp) as f64 * w;
                let avg = *total / self.instances as f64;
                // keep the model sparse
                let avg = (avg * 1000.0).round() / 1000.0;
                if avg != 0.0 {
                    out.entry(feat.clone())
                        .or_default()
                        .insert(class.clone(), avg);
                }
            }
        }
        out
    }
}

/// Train an averaged perceptron on `(token, tag)` sentences. Deterministic
/// given the seed: epoch shuffles use the crate PRNG and every accumulator is
/// an ordered map.
pub fn train(sentences: &[Vec<(String, String)>], epochs: usize, seed: u64) -> PerceptronTagger {
    // tag dictionary: frequent, effectively unambiguous words
    let mut word_tag_counts: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    let mut classes: Vec<String> = Vec::new();
    for sent in sentences {
        for (word, tag) in sent {
            *word_tag_counts
                .entry(normalize(word))
                .or_default()
                .entry(tag.clone())
                .or_insert(0) += 1;
            if !classes.contains(tag) {
                classes.push(tag.clone());
            }
        }
    }
    classes.sort();
    let mut tag_dict = BTreeMap::new();
    for (word, tags) in &word_tag_counts {
        let total: u64 = tags.values().sum();
        let (best_tag, best_n) = tags
            .iter()
            .max_by_key(|(_, n)| **n)
            .map(|(t, n)| (t.clone(), *n))
            .unwrap();
        if total >= 3 && best_n as f64 / total as f64 >= 0.99 {
            tag_dict.insert(word.clone(), best_tag);
        }
    }

    let mut state = TrainState::default();
    let mut order: Vec<usize> = (0..sentences.len()).collect();
    let mut rng = SplitMix64::new(seed);
    for _ in 0..epochs {
        rng.shuffle(&mut order);
        for &si in &order {
            let sent = &sentences[si];
            let tokens: Vec<String> = sent.iter().map(|(w, _)| w.clone()).collect();
            let context = make_context(&tokens);
            let mut prev = START[1].to_string();
            let mut prev2 = START[0].to_string();
            for (i, (word, truth)) in sent.iter().enumerate() {
                let norm = normalize(word);
                let guess = match tag_dict.get(&norm) {
                    Some(t) => t.clone(),
                    None => {
                        let feats = features(i, &norm, &context, &prev, &prev2);
                        let guess = {
                            let mut scores: BTreeMap<&str, f64> = BTreeMap::new();
                            for f in &feats {
                                if let Some(per_class) = state.weights.get(f) {
                                    for (c, w) in per_class {
                                        *scores.entry(c).or_insert(0.0) += w;
                                    }
                                }
                            }
                            scores
                                .into_iter()
                                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(b.0)))
                                .map(|(c, _)| c.to_string())
                                .unwrap_or_else(|| classes[0].clone())
                        };
                        state.update(truth, &guess, &feats);
                        guess
                    }
                };
                prev2 = std::mem::replace(&mut prev, guess);
            }
        }
    }

    PerceptronTagger {
        classes,
        tag_dict,
        weights: state.averaged(),
    }
}

/// Token-level accuracy of a tagger on `(token, tag)` sentences.
pub fn accuracy(tagger: &PerceptronTagger, sentences: &[Vec<(String, String)>]) -> f64 {
    let mut total = 0u64;
    let mut correct = 0u64;
    for sent in sentences {
        let tokens: Vec<String> = sent.iter().map(|(w, _)| w.clone()).collect();
        let tagged = tagger.tag(&tokens);
        for (got, (_, want)) in tagged.iter().zip(sent) {
            total += 1;
            if &got.tag == want {
                correct += 1;
            }
        }
    }
    if total == 0 {
        return 0.0;
    }
    correct as f64 / total as f64
}

/// Parse the `word_TAG word_TAG ...` line format of the shipped training and
/// evaluation files. Blank lines and `#` comments are skipped.
pub fn parse_tagged_file(content: &str) -> Vec<Vec<(String, String)>> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            line.split_whitespace()
                .map(|pair| {
                    let (word, tag) = pair
                        .rsplit_once('_')
                        .unwrap_or_else(|| panic!("bad token_TAG pair: {pair}"));
                    (word.to_string(), tag.to_string())
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn embedded_model_loads() {
        let tagger = PerceptronTagger::embedded();
        assert!(!tagger.classes.is_empty());
        assert!(!tagger.weights.is_empty());
    }

    #[test]
    fn gold_example_sentence() {
        let tagger = PerceptronTagger::embedded();
        let tags: Vec<String> = tagger
            .tag(&toks(&["participants", "met", "criteria"]))
            .into_iter()
            .map(|t| t.tag)
            .collect();
        assert_eq!(tags, vec!["NNS", "VBD", "NNS"]);
    }

    #[test]
    fn empty_input() {
        let tagger = PerceptronTagger::embedded();
        assert!(tagger.tag(&[]).is_empty());
    }

    #[test]
    fn parens_tag_as_themselves() {
        let tagger = PerceptronTagger::embedded();
        let tagged = tagger.tag(&toks(&["(", "criteria", ")"]));
        assert_eq!(tagged[0].tag, "(");
        assert_eq!(tagged[2].tag, ")");
    }

    #[test]
    fn pre_annotated_tags_pass_through() {
        let tagger = PerceptronTagger::embedded();
        let tokens = toks(&["weird", "input"]);
        let pre = toks(&["XX", "YY"]);
        let tagged = tag_with_override(&tagger, &tokens, Some(&pre));
        assert_eq!(tagged[0].tag, "XX");
        assert_eq!(tagged[1].tag, "YY");
    }

    #[test]
    fn misaligned_pre_tags_fall_back_to_model() {
        let tagger = PerceptronTagger::embedded();
        let tokens = toks(&["participants", "met", "criteria"]);
        let pre = toks(&["XX"]);
        let tagged = tag_with_override(&tagger, &tokens, Some(&pre));
        assert_eq!(tagged[1].tag, "VBD");
    }

    #[test]
    fn training_is_deterministic() {
        let sents = vec![
            vec![
                ("patients".to_string(), "NNS".to_string()),
                ("met".to_string(), "VBD".to_string()),
            ],
            vec![
                ("clinicians".to_string(), "NNS".to_string()),
                ("agreed".to_string(), "VBD".to_string()),
            ],
        ];
        let a = train(&sents, 3, 1).to_json();
        let b = train(&sents, 3, 1).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn model_roundtrips_through_json() {
        let tagger = PerceptronTagger::embedded();
        let reloaded = PerceptronTagger::from_json(&tagger.to_json()).unwrap();
        let sent = toks(&["the", "criteria", "were", "used"]);
        assert_eq!(tagger.tag(&sent), reloaded.tag(&sent));
    }

    #[test]
    fn bad_model_json_is_load_failure() {
        assert!(matches!(
            PerceptronTagger::from_json("{"),
            Err(TaggerError::ModelLoadFailure(_))
        ));
    }
}
