//! Per-language word lists feeding the perturbation kinds.
//!
//! On-disk layout: `<lexicon_root>/<code_Script>/<category>.txt` with one
//! surface per line (`#` comments allowed), plus `verb_forms.tsv` mapping
//! `surface TAB alt1,alt2,...`. English and Hindi sets are bundled.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io;
use std::path::Path;

use crate::lang::LanguageTag;
use crate::text::{is_punct_token, nfc, tokens};

use super::PerturbationKind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind:?} needs a non-empty {resource} for {language}")]
pub struct MissingResource {
    pub kind: PerturbationKind,
    pub resource: &'static str,
    pub language: String,
}

/// Word lists for one language.
#[derive(Debug, Clone, Default)]
pub struct LexiconSet {
    pronouns: Vec<String>,
    adpositions: Vec<String>,
    connectives: Vec<String>,
    punctuation: Vec<String>,
    verb_forms: BTreeMap<String, Vec<String>>,
    random_pool: Vec<String>,
    pronoun_keys: HashSet<String>,
    adposition_keys: HashSet<String>,
    connective_keys: HashSet<String>,
    char_pool: Vec<char>,
}

fn fold(word: &str) -> String {
    word.to_lowercase()
}

fn parse_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(nfc)
        .collect()
}

fn parse_verb_forms(text: &str) -> BTreeMap<String, Vec<String>> {
    let mut out = BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((surface, alts)) = line.split_once('\t') {
            let alts: Vec<String> = alts
                .split(',')
                .map(str::trim)
                .filter(|a| !a.is_empty())
                .map(nfc)
                .collect();
            if !alts.is_empty() {
                out.insert(nfc(surface.trim()), alts);
            }
        }
    }
    out
}

impl LexiconSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_pronouns<S: Into<String>>(mut self, items: impl IntoIterator<Item = S>) -> Self {
        self.pronouns = items.into_iter().map(|s| nfc(&s.into())).collect();
        self.rebuild_indexes();
        self
    }

    pub fn with_adpositions<S: Into<String>>(mut self, items: impl IntoIterator<Item = S>) -> Self {
        self.adpositions = items.into_iter().map(|s| nfc(&s.into())).collect();
        self.rebuild_indexes();
        self
    }

    pub fn with_connectives<S: Into<String>>(mut self, items: impl IntoIterator<Item = S>) -> Self {
        self.connectives = items.into_iter().map(|s| nfc(&s.into())).collect();
        self.rebuild_indexes();
        self
    }

    pub fn with_punctuation<S: Into<String>>(mut self, items: impl IntoIterator<Item = S>) -> Self {
        self.punctuation = items.into_iter().map(|s| nfc(&s.into())).collect();
        self
    }

    pub fn with_verb_forms<S: Into<String>>(
        mut self,
        items: impl IntoIterator<Item = (S, Vec<S>)>,
    ) -> Self {
        self.verb_forms = items
            .into_iter()
            .map(|(k, v)| (nfc(&k.into()), v.into_iter().map(|a| nfc(&a.into())).collect()))
            .collect();
        self
    }

    pub fn with_random_pool<S: Into<String>>(mut self, items: impl IntoIterator<Item = S>) -> Self {
        // Pool entries must be single clean tokens; re-tokenize to be sure.
        self.random_pool = items
            .into_iter()
            .map(|s| nfc(&s.into()))
            .filter(|s| {
                let toks = tokens(s);
                toks.len() == 1 && !is_punct_token(&toks[0])
            })
            .collect();
        self.rebuild_char_pool();
        self
    }

    fn rebuild_indexes(&mut self) {
        self.pronoun_keys = self.pronouns.iter().map(|w| fold(w)).collect();
        self.adposition_keys = self.adpositions.iter().map(|w| fold(w)).collect();
        self.connective_keys = self.connectives.iter().map(|w| fold(w)).collect();
    }

    fn rebuild_char_pool(&mut self) {
        let set: BTreeSet<char> = self
            .random_pool
            .iter()
            .flat_map(|w| w.chars())
            .filter(|c| c.is_alphabetic())
            .collect();
        self.char_pool = set.into_iter().collect();
    }

    /// Load from `<root>/<code_Script>/` files; a missing category file
    /// leaves that list empty (and the kind unavailable).
    pub fn load(root: &Path, tag: &LanguageTag) -> io::Result<Self> {
        let dir = root.join(tag.code_script());
        let read = |name: &str| -> io::Result<Option<String>> {
            match std::fs::read_to_string(dir.join(name)) {
                Ok(text) => Ok(Some(text)),
                Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
                Err(e) => Err(e),
            }
        };
        let mut set = LexiconSet::new();
        if let Some(text) = read("pronouns.txt")? {
            set = set.with_pronouns(parse_list(&text));
        }
        if let Some(text) = read("adpositions.txt")? {
            set = set.with_adpositions(parse_list(&text));
        }
        if let Some(text) = read("connectives.txt")? {
            set = set.with_connectives(parse_list(&text));
        }
        if let Some(text) = read("punctuation.txt")? {
            set = set.with_punctuation(parse_list(&text));
        }
        if let Some(text) = read("random_tokens.txt")? {
            set = set.with_random_pool(parse_list(&text));
        }
        if let Some(text) = read("verb_forms.tsv")? {
            set.verb_forms = parse_verb_forms(&text);
        }
        Ok(set)
    }

    /// Bundled lexicons, currently English and Hindi.
    pub fn builtin(tag: &LanguageTag) -> Option<Self> {
        let files: [&str; 6] = match tag.code_script().as_str() {
            "eng_Latn" => [
                include_str!("../../assets/lexicons/eng_Latn/pronouns.txt"),
                include_str!("../../assets/lexicons/eng_Latn/adpositions.txt"),
                include_str!("../../assets/lexicons/eng_Latn/connectives.txt"),
                include_str!("../../assets/lexicons/eng_Latn/punctuation.txt"),
                include_str!("../../assets/lexicons/eng_Latn/random_tokens.txt"),
                include_str!("../../assets/lexicons/eng_Latn/verb_forms.tsv"),
            ],
            "hin_Deva" => [
                include_str!("../../assets/lexicons/hin_Deva/pronouns.txt"),
                include_str!("../../assets/lexicons/hin_Deva/adpositions.txt"),
                include_str!("../../assets/lexicons/hin_Deva/connectives.txt"),
                include_str!("../../assets/lexicons/hin_Deva/punctuation.txt"),
                include_str!("../../assets/lexicons/hin_Deva/random_tokens.txt"),
                include_str!("../../assets/lexicons/hin_Deva/verb_forms.tsv"),
            ],
            _ => return None,
        };
        let mut set = LexiconSet::new()
            .with_pronouns(parse_list(files[0]))
            .with_adpositions(parse_list(files[1]))
            .with_connectives(parse_list(files[2]))
            .with_punctuation(parse_list(files[3]))
            .with_random_pool(parse_list(files[4]));
        set.verb_forms = parse_verb_forms(files[5]);
        Some(set)
    }

    pub fn pronouns(&self) -> &[String] {
        &self.pronouns
    }

    pub fn adpositions(&self) -> &[String] {
        &self.adpositions
    }

    pub fn connectives(&self) -> &[String] {
        &self.connectives
    }

    pub fn punctuation_marks(&self) -> &[String] {
        &self.punctuation
    }

    pub fn verb_forms(&self) -> &BTreeMap<String, Vec<String>> {
        &self.verb_forms
    }

    pub fn random_pool(&self) -> &[String] {
        &self.random_pool
    }

    /// Alphabetic characters observed in the random pool; the spelling
    /// kind draws replacement characters here.
    pub fn char_pool(&self) -> &[char] {
        &self.char_pool
    }

    pub fn is_pronoun(&self, word: &str) -> bool {
        self.pronoun_keys.contains(&fold(word))
    }

    pub fn is_adposition(&self, word: &str) -> bool {
        self.adposition_keys.contains(&fold(word))
    }

    pub fn is_connective(&self, word: &str) -> bool {
        self.connective_keys.contains(&fold(word))
    }

    pub fn is_function_word(&self, word: &str) -> bool {
        self.is_pronoun(word) || self.is_adposition(word) || self.is_connective(word)
    }

    /// Verb alternatives for an exact surface, if any.
    pub fn verb_alternatives(&self, surface: &str) -> Option<&[String]> {
        self.verb_forms.get(surface).map(Vec::as_slice)
    }

    /// Check that the lists a kind depends on are present.
    pub fn ensure_available(
        &self,
        kind: PerturbationKind,
        language: &LanguageTag,
    ) -> Result<(), MissingResource> {
        let missing = |resource: &'static str| MissingResource {
            kind,
            resource,
            language: language.to_string(),
        };
        match kind {
            PerturbationKind::PronounSwap if self.pronouns.len() < 2 => {
                Err(missing("pronoun list (>= 2 entries)"))
            }
            PerturbationKind::AdpositionSwap if self.adpositions.len() < 2 => {
                Err(missing("adposition list (>= 2 entries)"))
            }
            PerturbationKind::ConnectiveSwap if self.connectives.len() < 2 => {
                Err(missing("connective list (>= 2 entries)"))
            }
            PerturbationKind::VerbForm if self.verb_forms.is_empty() => {
                Err(missing("verb-form table"))
            }
            PerturbationKind::Punctuation if self.punctuation.is_empty() => {
                Err(missing("punctuation list"))
            }
            PerturbationKind::TokenNoise
            | PerturbationKind::LexicalCohesion
            | PerturbationKind::Mask
                if self.random_pool.is_empty() =>
            {
                Err(missing("random-token pool"))
            }
            PerturbationKind::Spelling if self.char_pool.is_empty() => {
                Err(missing("random-token pool (character source)"))
            }
            _ => Ok(()),
        }
    }
}
