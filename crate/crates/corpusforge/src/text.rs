//! Shared text primitives: NFC normalization, the tokenizer used by the
//! perturbation engine and the metric suite, and a stable 64-bit hash for
//! seed derivation.
//!
//! All span coordinates in this crate refer to tokens produced by
//! [`tokenize`] over NFC-normalized text. Keeping one tokenizer everywhere is
//! what makes edit logs, span markup, and span-F1 agree on coordinates.

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

/// NFC-normalize a string. Applied once at ingestion; all downstream offsets
/// refer to the normalized text.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Collapse interior whitespace runs to single spaces and trim the ends.
pub fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// True if the character is Unicode punctuation (general category P*).
pub fn is_punct_char(c: char) -> bool {
    c.general_category_group() == GeneralCategoryGroup::Punctuation
}

/// True if the token consists entirely of punctuation characters.
pub fn is_punct_token(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(is_punct_char)
}

/// A half-open token interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TokenSpan {
    pub start: usize,
    pub end: usize,
}

impl TokenSpan {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// Tokenized text that remembers the "glue" between tokens so the original
/// string can be reproduced byte-exactly and edits stay local.
///
/// `glues.len() == tokens.len() + 1`: `glues[0]` precedes the first token,
/// `glues[i]` sits between `tokens[i-1]` and `tokens[i]`, and the last glue
/// trails the final token. A glue is empty exactly where the tokenizer split
/// punctuation off a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedText {
    tokens: Vec<String>,
    glues: Vec<String>,
}

/// Split text into word and punctuation tokens.
///
/// Words are maximal non-whitespace runs; each punctuation character
/// (category P) inside a run becomes its own token. The inter-token glue
/// preserves the original whitespace.
pub fn tokenize(text: &str) -> TokenizedText {
    let mut tokens = Vec::new();
    let mut glues = Vec::new();
    let mut glue = String::new();
    let mut word = String::new();

    let flush_word = |word: &mut String, glue: &mut String, tokens: &mut Vec<String>, glues: &mut Vec<String>| {
        if !word.is_empty() {
            glues.push(std::mem::take(glue));
            tokens.push(std::mem::take(word));
        }
    };

    for c in text.chars() {
        if c.is_whitespace() {
            flush_word(&mut word, &mut glue, &mut tokens, &mut glues);
            glue.push(c);
        } else if is_punct_char(c) {
            flush_word(&mut word, &mut glue, &mut tokens, &mut glues);
            glues.push(std::mem::take(&mut glue));
            tokens.push(c.to_string());
        } else {
            word.push(c);
        }
    }
    flush_word(&mut word, &mut glue, &mut tokens, &mut glues);
    glues.push(glue);

    TokenizedText { tokens, glues }
}

/// Token sequence only, for metrics that do not need reconstruction.
pub fn tokens(text: &str) -> Vec<String> {
    tokenize(text).tokens
}

impl TokenizedText {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    /// Reassemble the exact surface string.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, tok) in self.tokens.iter().enumerate() {
            out.push_str(&self.glues[i]);
            out.push_str(tok);
        }
        out.push_str(self.glues.last().map(String::as_str).unwrap_or(""));
        out
    }

    /// Surface of the token range `[start, end)` including interior glue.
    pub fn surface(&self, span: TokenSpan) -> String {
        let mut out = String::new();
        for i in span.start..span.end {
            if i > span.start {
                out.push_str(&self.glues[i]);
            }
            out.push_str(&self.tokens[i]);
        }
        out
    }

    /// Replace tokens `[start, end)` with `new_tokens`, splicing glue so the
    /// result renders naturally: boundary glue is preserved, interior glue
    /// between inserted tokens is a single space, and a deletion collapses
    /// the two boundary glues into one. Word/word junctions that an edit
    /// leaves with empty glue are repaired to a single space; word/punct
    /// junctions keep their empty glue.
    pub fn splice(&mut self, start: usize, end: usize, new_tokens: &[String]) {
        assert!(start <= end && end <= self.tokens.len(), "splice out of range");
        let n = new_tokens.len();
        let t = self.tokens.len();

        if n == 0 {
            if start == end {
                return;
            }
            let kept = if start == 0 {
                self.glues[0].clone()
            } else if end == t {
                self.glues[end].clone()
            } else {
                self.glues[start].clone()
            };
            self.tokens.splice(start..end, std::iter::empty());
            self.glues.splice(start..=end, std::iter::once(kept));
            self.repair(start);
            return;
        }

        if start == end {
            // Pure insertion: synthesize one new glue slot.
            let (before, after) = if t == 0 {
                (self.glues[0].clone(), String::new())
            } else if start == 0 {
                (self.glues[0].clone(), " ".to_string())
            } else {
                (" ".to_string(), self.glues[start].clone())
            };
            let mut new_glues = Vec::with_capacity(self.glues.len() + n);
            new_glues.extend_from_slice(&self.glues[..start]);
            new_glues.push(before);
            for _ in 1..n {
                new_glues.push(" ".to_string());
            }
            new_glues.push(after);
            if t > 0 {
                new_glues.extend_from_slice(&self.glues[start + 1..]);
            }
            self.glues = new_glues;
            self.tokens.splice(start..start, new_tokens.iter().cloned());
        } else {
            let mut new_glues = Vec::with_capacity(self.glues.len());
            new_glues.extend_from_slice(&self.glues[..=start]);
            for _ in 1..n {
                new_glues.push(" ".to_string());
            }
            new_glues.extend_from_slice(&self.glues[end..]);
            self.glues = new_glues;
            self.tokens.splice(start..end, new_tokens.iter().cloned());
        }
        self.repair(start);
        self.repair(start + n);
    }

    /// Repair one glue slot after an edit: two non-punctuation tokens must
    /// not touch with empty glue.
    fn repair(&mut self, glue_idx: usize) {
        if glue_idx == 0 || glue_idx >= self.tokens.len() {
            return;
        }
        if self.glues[glue_idx].is_empty()
            && !is_punct_token(&self.tokens[glue_idx - 1])
            && !is_punct_token(&self.tokens[glue_idx])
        {
            self.glues[glue_idx] = " ".to_string();
        }
    }
}

/// Stable 64-bit FNV-1a over byte chunks. Used to derive per-record seeds
/// from a global seed; must never change across releases.
pub fn stable_hash64<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for part in parts {
        // Length-prefix each part so ("ab","c") != ("a","bc").
        for b in (part.len() as u64).to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(PRIME);
        }
        for &b in part {
            h ^= u64::from(b);
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

/// Per-record seed from a global seed and a record identifier.
pub fn derive_seed(global_seed: u64, record_id: &str) -> u64 {
    stable_hash64([global_seed.to_le_bytes().as_slice(), record_id.as_bytes()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tokenize_splits_punctuation() {
        let t = tokenize("the cat, sat.");
        assert_eq!(t.tokens(), ["the", "cat", ",", "sat", "."]);
        assert_eq!(t.render(), "the cat, sat.");
    }

    #[test]
    fn tokenize_preserves_odd_whitespace() {
        let t = tokenize("  a\tb  c ");
        assert_eq!(t.tokens(), ["a", "b", "c"]);
        assert_eq!(t.render(), "  a\tb  c ");
    }

    #[test]
    fn tokenize_devanagari_danda() {
        let t = tokenize("नमस्ते दुनिया।");
        assert_eq!(t.tokens(), ["नमस्ते", "दुनिया", "।"]);
        assert_eq!(t.render(), "नमस्ते दुनिया।");
    }

    #[test]
    fn splice_delete_middle() {
        let mut t = tokenize("the cat sat");
        t.splice(1, 2, &[]);
        assert_eq!(t.render(), "the sat");
    }

    #[test]
    fn splice_delete_first_and_last() {
        let mut t = tokenize("the cat sat");
        t.splice(0, 1, &[]);
        assert_eq!(t.render(), "cat sat");
        let mut t = tokenize("the cat sat");
        t.splice(2, 3, &[]);
        assert_eq!(t.render(), "the cat");
    }

    #[test]
    fn splice_delete_punct_repairs_glue() {
        let mut t = tokenize("cat, sat");
        t.splice(1, 2, &[]);
        assert_eq!(t.render(), "cat sat");
    }

    #[test]
    fn splice_insert_positions() {
        let mut t = tokenize("a b");
        t.splice(1, 1, &["x".into()]);
        assert_eq!(t.render(), "a x b");

        let mut t = tokenize("a b");
        t.splice(0, 0, &["x".into()]);
        assert_eq!(t.render(), "x a b");

        let mut t = tokenize("a b");
        t.splice(2, 2, &["x".into()]);
        assert_eq!(t.render(), "a b x");
    }

    #[test]
    fn splice_replace_keeps_punct_glue() {
        let mut t = tokenize("cat, sat");
        t.splice(0, 1, &["dog".into()]);
        assert_eq!(t.render(), "dog, sat");
        t.splice(1, 2, &[";".into()]);
        assert_eq!(t.render(), "dog; sat");
    }

    #[test]
    fn splice_reorder_block() {
        let mut t = tokenize("a b c d e");
        t.splice(1, 4, &["c".into(), "b".into(), "d".into()]);
        assert_eq!(t.render(), "a c b d e");
    }

    #[test]
    fn surface_of_span() {
        let t = tokenize("the cat, sat");
        assert_eq!(t.surface(TokenSpan::new(1, 3)), "cat,");
    }

    #[test]
    fn stable_hash_is_fixed() {
        // Frozen: changing these values would silently re-seed every plan.
        assert_eq!(stable_hash64([b"".as_slice()]), 0xa8c7_f832_281a_39c5);
        assert_eq!(
            stable_hash64([b"corpus".as_slice(), b"forge".as_slice()]),
            0x80e0_ba52_349a_f2ed
        );
        // Length prefixes keep part boundaries significant.
        assert_ne!(
            stable_hash64([b"corpus".as_slice(), b"forge".as_slice()]),
            stable_hash64([b"corpusforge".as_slice()])
        );
        assert_ne!(derive_seed(1, "a"), derive_seed(2, "a"));
        assert_ne!(derive_seed(1, "a"), derive_seed(1, "b"));
    }

    proptest! {
        #[test]
        fn render_is_identity(s in "\\PC*") {
            let t = tokenize(&s);
            prop_assert_eq!(t.render(), s);
        }

        #[test]
        fn retokenize_is_stable(s in "\\PC*") {
            let t = tokenize(&s);
            let again = tokenize(&t.render());
            prop_assert_eq!(t, again);
        }
    }
}
