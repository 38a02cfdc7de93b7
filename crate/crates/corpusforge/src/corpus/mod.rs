//! Core corpus data types: sentence pairs, passages, task records, and the
//! streaming readers/writers for the on-disk TSV/JSONL formats.

mod io;
mod record;

pub use io::{read_pairs, write_pairs, LineError, LineErrorKind, PairFormat, PairReader, ReaderOptions};
pub use record::{read_records, write_records, OutputValue, RecordReader, TaskRecord, WriteError};

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::LanguageTag;
use crate::text::{collapse_whitespace, nfc};

/// Where a pair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Human,
    Mined,
    Pivot,
    Backtranslated,
    Perturbed,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PairError {
    #[error("{side} text empty after trimming")]
    EmptyText { side: &'static str },
    #[error("score {0} outside [1, 100]")]
    ScoreOutOfRange(f64),
    #[error("passage has no sentences")]
    EmptyPassage,
}

/// An aligned source/target sentence pair.
///
/// Texts are NFC-normalized at construction; every downstream span offset
/// refers to the normalized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentencePair {
    pub id: String,
    pub src_tag: LanguageTag,
    pub tgt_tag: LanguageTag,
    pub src_text: String,
    pub tgt_text: String,
    pub domain: String,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<String>,
}

impl SentencePair {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: impl Into<String>,
        src_tag: LanguageTag,
        tgt_tag: LanguageTag,
        src_text: &str,
        tgt_text: &str,
        domain: impl Into<String>,
        provenance: Provenance,
        score: Option<f64>,
    ) -> Result<Self, PairError> {
        let src_text = nfc(src_text);
        let tgt_text = nfc(tgt_text);
        if src_text.trim().is_empty() {
            return Err(PairError::EmptyText { side: "source" });
        }
        if tgt_text.trim().is_empty() {
            return Err(PairError::EmptyText { side: "target" });
        }
        if let Some(s) = score {
            if !(1.0..=100.0).contains(&s) {
                return Err(PairError::ScoreOutOfRange(s));
            }
        }
        let domain = domain.into();
        Ok(Self {
            id: id.into(),
            src_tag,
            tgt_tag,
            src_text,
            tgt_text,
            domain: if domain.is_empty() { "general".into() } else { domain },
            provenance,
            score,
            extra: Vec::new(),
        })
    }
}

/// An ordered multi-sentence passage in one language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Passage {
    pub id: String,
    pub tag: LanguageTag,
    pub sentences: Vec<String>,
    pub domain: String,
}

impl Passage {
    pub fn new(
        id: impl Into<String>,
        tag: LanguageTag,
        sentences: Vec<String>,
        domain: impl Into<String>,
    ) -> Result<Self, PairError> {
        if sentences.is_empty() {
            return Err(PairError::EmptyPassage);
        }
        let domain = domain.into();
        Ok(Self {
            id: id.into(),
            tag,
            sentences: sentences.iter().map(|s| nfc(s)).collect(),
            domain: if domain.is_empty() { "general".into() } else { domain },
        })
    }
}

/// Keep/reject accounting for a pipeline stage or run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub total: u64,
    pub kept: u64,
    pub rejected: u64,
    pub rejected_by_reason: BTreeMap<String, u64>,
}

impl CorpusStats {
    pub fn record_kept(&mut self) {
        self.total += 1;
        self.kept += 1;
    }

    pub fn record_rejected(&mut self, reason: &str) {
        self.total += 1;
        self.rejected += 1;
        *self.rejected_by_reason.entry(reason.to_string()).or_default() += 1;
    }

    pub fn merge(&mut self, other: &CorpusStats) {
        self.total += other.total;
        self.kept += other.kept;
        self.rejected += other.rejected;
        for (k, v) in &other.rejected_by_reason {
            *self.rejected_by_reason.entry(k.clone()).or_default() += v;
        }
    }

    /// kept + rejected == total, and the per-reason counts sum to rejected.
    pub fn is_balanced(&self) -> bool {
        self.kept + self.rejected == self.total
            && self.rejected_by_reason.values().sum::<u64>() == self.rejected
    }
}

/// Drop exact duplicates, keeping first occurrences in order.
///
/// The duplicate key is (src_text, tgt_text) after NFC normalization and
/// whitespace collapsing, so pairs differing only in stray whitespace or
/// combining-sequence encoding count as the same pair.
pub fn dedupe<I>(pairs: I) -> impl Iterator<Item = SentencePair>
where
    I: IntoIterator<Item = SentencePair>,
{
    let mut seen: HashSet<String> = HashSet::new();
    pairs.into_iter().filter(move |p| {
        let mut key = collapse_whitespace(&nfc(&p.src_text));
        key.push('\u{0}');
        key.push_str(&collapse_whitespace(&nfc(&p.tgt_text)));
        seen.insert(key)
    })
}
