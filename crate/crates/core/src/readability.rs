//! Flesch Reading Ease scoring over single citation sentences.
//!
//! The score is the standard `206.835 - 1.015 * (words/sentences) -
//! 84.6 * (syllables/words)` with the sentence count fixed at one, because the
//! unit of analysis is a single citance. Scores are deliberately not clamped
//! to 0..100: short factual sentences legitimately exceed 100 and clamping
//! would bias population means.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ReadabilityError {
    #[error("cannot score an empty sentence")]
    EmptySentence,
}

const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u', 'y'];

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

/// Heuristic syllable count for a lowercased word token: the number of
/// maximal vowel-letter groups (a, e, i, o, u, y), minus one for a terminal
/// silent "e", except when the word ends in consonant + "le", where the
/// final syllable is real ("table"). Never returns less than 1.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .flat_map(|c| c.to_lowercase())
        .filter(|c| c.is_alphabetic())
        .collect();
    if letters.is_empty() {
        return 1;
    }

    let mut groups = 0;
    let mut in_group = false;
    for &c in &letters {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }

    let n = letters.len();
    let silent_e = n >= 2
        && letters[n - 1] == 'e'
        && !is_vowel(letters[n - 2])
        && !(n >= 3 && letters[n - 1] == 'e' && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]));

    if silent_e {
        groups -= 1;
    }
    groups.max(1)
}

/// Flesch Reading Ease of one sentence given its word tokens.
/// Returned unclamped; errors on an empty token list.
pub fn flesch_score(tokens: &[String]) -> Result<f64, ReadabilityError> {
    if tokens.is_empty() {
        return Err(ReadabilityError::EmptySentence);
    }
    let words = tokens.len() as f64;
    let syllables: usize = tokens.iter().map(|t| count_syllables(t)).sum();
    Ok(206.835 - 1.015 * words - 84.6 * (syllables as f64 / words))
}

/// Word and syllable totals for one sentence, as stored on feature vectors.
pub fn sentence_counts(tokens: &[String]) -> (usize, usize) {
    let syllables = tokens.iter().map(|t| count_syllables(t)).sum();
    (tokens.len(), syllables)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        crate::tokens::words(s)
    }

    #[test]
    fn single_vowel_group() {
        assert_eq!(count_syllables("cat"), 1);
    }

    #[test]
    fn silent_e_dropped() {
        // cha-rac-ter-ize: five vowel groups (a, a, e, i, e), terminal e silent
        assert_eq!(count_syllables("characterize"), 4);
        assert_eq!(count_syllables("use"), 1);
        assert_eq!(count_syllables("include"), 2);
    }

    #[test]
    fn consonant_le_keeps_final_syllable() {
        assert_eq!(count_syllables("table"), 2);
        assert_eq!(count_syllables("sample"), 2);
        // vowel before the "le" means the e really is silent
        assert_eq!(count_syllables("whale"), 1);
    }

    #[test]
    fn floor_at_one() {
        assert_eq!(count_syllables("the"), 1);
        assert_eq!(count_syllables("dsm-5"), 1);
        assert_eq!(count_syllables("2013"), 1);
    }

    #[test]
    fn y_counts_as_vowel() {
        assert_eq!(count_syllables("study"), 2);
        assert_eq!(count_syllables("methodology"), 5);
    }

    #[test]
    fn flesch_six_monosyllables() {
        // 6 words, 6 syllables: 206.835 - 1.015*6 - 84.6*1 = 116.145
        let score = flesch_score(&toks("The cat sat on the mat")).unwrap();
        assert!((score - 116.145).abs() < 1e-9);
    }

    #[test]
    fn flesch_single_word() {
        // 206.835 - 1.015 - 84.6 = 121.22
        let score = flesch_score(&toks("cat")).unwrap();
        assert!((score - 121.22).abs() < 1e-9);
    }

    #[test]
    fn flesch_twenty_words_forty_syllables() {
        // 206.835 - 1.015*20 - 84.6*2 = 17.335
        let tokens: Vec<String> = std::iter::repeat_n("purpose".to_string(), 20).collect();
        assert_eq!(count_syllables("purpose"), 2);
        let score = flesch_score(&tokens).unwrap();
        assert!((score - 17.335).abs() < 1e-9);
    }

    #[test]
    fn empty_sentence_is_an_error() {
        assert_eq!(flesch_score(&[]), Err(ReadabilityError::EmptySentence));
    }

    #[test]
    fn monosyllable_raises_score_of_polysyllabic_sentence() {
        // adding a one-syllable word strictly increases the score when the
        // running syllable average exceeds one
        let base = toks("researchers characterized responses");
        let mut longer = base.clone();
        longer.push("at".to_string());
        let a = flesch_score(&base).unwrap();
        let b = flesch_score(&longer).unwrap();
        assert!(b > a);
    }
}
