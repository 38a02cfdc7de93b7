//! Prefix trie over a monolingual vocabulary, used to propose inflected
//! sibling forms: two words are siblings when they share a prefix of at
//! least `max(min_stem_len, ceil(0.6 * min(len)))` characters and differ in
//! their suffixes.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrieError {
    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("min_stem_len {0} too small (want >= 2)")]
    StemTooShort(usize),
}

#[derive(Debug, Default)]
struct Node {
    children: BTreeMap<char, Node>,
    is_word: bool,
    frequency: u64,
}

impl Node {
    fn insert(&mut self, word: &str, frequency: u64) {
        let mut node = self;
        for c in word.chars() {
            node = node.children.entry(c).or_default();
        }
        node.is_word = true;
        node.frequency += frequency;
    }

    fn collect_into(&self, prefix: &mut String, out: &mut Vec<String>) {
        if self.is_word {
            out.push(prefix.clone());
        }
        for (c, child) in &self.children {
            prefix.push(*c);
            child.collect_into(prefix, out);
            prefix.pop();
        }
    }
}

/// Sibling-inflection index over a vocabulary.
#[derive(Debug)]
pub struct InflectionTrie {
    root: Node,
    min_stem_len: usize,
    words: usize,
}

/// Build the trie from `(word, frequency)` entries.
pub fn build_inflection_trie(
    vocabulary: impl IntoIterator<Item = (String, u64)>,
    min_stem_len: usize,
) -> Result<InflectionTrie, TrieError> {
    if min_stem_len < 2 {
        return Err(TrieError::StemTooShort(min_stem_len));
    }
    let mut root = Node::default();
    let mut words = 0;
    for (word, frequency) in vocabulary {
        let word = word.trim();
        if word.is_empty() {
            continue;
        }
        root.insert(word, frequency);
        words += 1;
    }
    if words == 0 {
        return Err(TrieError::EmptyVocabulary);
    }
    Ok(InflectionTrie {
        root,
        min_stem_len,
        words,
    })
}

impl InflectionTrie {
    /// Convenience build from bare words (frequency 1 each).
    pub fn from_words<S: Into<String>>(
        words: impl IntoIterator<Item = S>,
        min_stem_len: usize,
    ) -> Result<Self, TrieError> {
        build_inflection_trie(words.into_iter().map(|w| (w.into(), 1)), min_stem_len)
    }

    pub fn min_stem_len(&self) -> usize {
        self.min_stem_len
    }

    pub fn word_count(&self) -> usize {
        self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        let mut node = &self.root;
        for c in word.chars() {
            match node.children.get(&c) {
                Some(child) => node = child,
                None => return false,
            }
        }
        node.is_word
    }

    /// Sibling inflected forms of `word`, sorted; never contains `word`
    /// itself, and every result is a vocabulary word.
    pub fn query(&self, word: &str) -> Vec<String> {
        let chars: Vec<char> = word.chars().collect();
        if chars.len() < self.min_stem_len {
            return Vec::new();
        }
        // Walk down the first min_stem_len characters; every candidate
        // shares at least that prefix.
        let mut node = &self.root;
        for c in &chars[..self.min_stem_len] {
            match node.children.get(c) {
                Some(child) => node = child,
                None => return Vec::new(),
            }
        }
        let mut prefix: String = chars[..self.min_stem_len].iter().collect();
        let mut candidates = Vec::new();
        node.collect_into(&mut prefix, &mut candidates);

        candidates.retain(|candidate| {
            if candidate == word {
                return false;
            }
            let cand_chars: Vec<char> = candidate.chars().collect();
            let shared = chars
                .iter()
                .zip(&cand_chars)
                .take_while(|(a, b)| a == b)
                .count();
            let min_len = chars.len().min(cand_chars.len());
            let threshold = self.min_stem_len.max((3 * min_len).div_ceil(5));
            shared >= threshold
        });
        candidates
    }
}
