//! Deterministic stub backends for hermetic tests and dry runs.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::lang::LanguageTag;
use crate::text::stable_hash64;

use super::{check_len, BackendError, ScorerClient, TranslatorClient};

/// Translator that prefixes each text with a fixed marker, so outputs are
/// distinguishable and deterministic: `"{marker}:{tgt_code}:{text}"`.
pub struct MarkerTranslator {
    pub marker: String,
}

impl MarkerTranslator {
    pub fn new(marker: impl Into<String>) -> Self {
        Self { marker: marker.into() }
    }
}

impl TranslatorClient for MarkerTranslator {
    fn translate(
        &self,
        texts: &[&str],
        _src: &LanguageTag,
        tgt: &LanguageTag,
    ) -> Result<Vec<String>, BackendError> {
        Ok(texts
            .iter()
            .map(|t| format!("{}:{}:{}", self.marker, tgt.code(), t))
            .collect())
    }
}

/// Translator that returns inputs unchanged.
pub struct IdentityTranslator;

impl TranslatorClient for IdentityTranslator {
    fn translate(
        &self,
        texts: &[&str],
        _src: &LanguageTag,
        _tgt: &LanguageTag,
    ) -> Result<Vec<String>, BackendError> {
        Ok(texts.iter().map(|t| t.to_string()).collect())
    }
}

/// Translator that always fails, for exercising skip/resume paths.
pub struct FailingTranslator;

impl TranslatorClient for FailingTranslator {
    fn translate(
        &self,
        _texts: &[&str],
        _src: &LanguageTag,
        _tgt: &LanguageTag,
    ) -> Result<Vec<String>, BackendError> {
        Err(BackendError::Transport("stub backend down".into()))
    }
}

/// Scorer with an explicit (source, translation) -> score table; unlisted
/// pairs fall back to `default`, or error when `default` is `None`.
pub struct TableScorer {
    table: HashMap<(String, String), f64>,
    default: Option<f64>,
}

impl TableScorer {
    pub fn new(entries: impl IntoIterator<Item = ((String, String), f64)>, default: Option<f64>) -> Self {
        Self {
            table: entries.into_iter().collect(),
            default,
        }
    }
}

impl ScorerClient for TableScorer {
    fn score(
        &self,
        pairs: &[(&str, &str)],
        _src: &LanguageTag,
        _tgt: &LanguageTag,
    ) -> Result<Vec<f64>, BackendError> {
        let scores = pairs
            .iter()
            .map(|(s, t)| {
                self.table
                    .get(&(s.to_string(), t.to_string()))
                    .copied()
                    .or(self.default)
                    .ok_or_else(|| BackendError::Protocol(format!("no scripted score for ({s:?}, {t:?})")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        check_len(pairs.len(), scores)
    }
}

/// Scorer that returns 100 for byte-equal pairs and `unequal` otherwise.
pub struct EqualityScorer {
    pub unequal: f64,
}

impl Default for EqualityScorer {
    fn default() -> Self {
        Self { unequal: 10.0 }
    }
}

impl ScorerClient for EqualityScorer {
    fn score(
        &self,
        pairs: &[(&str, &str)],
        _src: &LanguageTag,
        _tgt: &LanguageTag,
    ) -> Result<Vec<f64>, BackendError> {
        Ok(pairs
            .iter()
            .map(|(s, t)| if s == t { 100.0 } else { self.unequal })
            .collect())
    }
}

/// Deterministic pseudo-scorer: hashes the pair text into [0, 100). Useful
/// for demos and throughput runs where no backend is wired up.
pub struct HashScorer {
    pub seed: u64,
}

impl ScorerClient for HashScorer {
    fn score(
        &self,
        pairs: &[(&str, &str)],
        _src: &LanguageTag,
        _tgt: &LanguageTag,
    ) -> Result<Vec<f64>, BackendError> {
        Ok(pairs
            .iter()
            .map(|(s, t)| {
                let h = stable_hash64([
                    self.seed.to_le_bytes().as_slice(),
                    s.as_bytes(),
                    t.as_bytes(),
                ]);
                (h % 10_000) as f64 / 100.0
            })
            .collect())
    }
}

/// Scorer that replays a fixed sequence of per-call score batches. Each
/// call consumes one batch; extra calls error. For scripting multi-round
/// flows such as iterative back-translation.
pub struct SequenceScorer {
    batches: Mutex<std::collections::VecDeque<Vec<f64>>>,
    calls: Mutex<usize>,
}

impl SequenceScorer {
    pub fn new(batches: Vec<Vec<f64>>) -> Self {
        Self {
            batches: Mutex::new(batches.into()),
            calls: Mutex::new(0),
        }
    }
}

impl ScorerClient for SequenceScorer {
    fn score(
        &self,
        pairs: &[(&str, &str)],
        _src: &LanguageTag,
        _tgt: &LanguageTag,
    ) -> Result<Vec<f64>, BackendError> {
        let mut calls = self.calls.lock().unwrap();
        *calls += 1;
        let batch = self
            .batches
            .lock()
            .unwrap()
            .pop_front()
            .ok_or(BackendError::ScriptExhausted(*calls))?;
        check_len(pairs.len(), batch)
    }
}
