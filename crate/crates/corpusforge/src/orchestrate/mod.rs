//! Orchestration of external translation and scoring backends: QE-based
//! sentence alignment, pivot translation, iterative back-translation, and
//! paragraph-level back-translation.
//!
//! Backends are abstracted behind [`TranslatorClient`] and [`ScorerClient`];
//! deterministic scripted stubs live in [`stub`] so every pipeline is
//! testable hermetically. Replayability is a hard contract: the same stubs
//! and inputs give byte-identical outputs.

pub mod protocol;
pub mod stub;

mod align;
mod backtranslate;
mod checkpoint;
mod pivot;

pub use align::{align_sentences, AlignOptions, Alignment};
pub use backtranslate::{
    iterative_back_translate, paragraph_back_translate, BtOutcome, BtState, TextAudit,
    TranslatorFactory, DEFAULT_BT_ROUNDS,
};
pub use checkpoint::Checkpoint;
pub use pivot::{pivot_translate, PivotOptions, PivotOutcome};

use thiserror::Error;

use crate::lang::LanguageTag;

/// Backend failure. `retriable` marks transport-level trouble worth a
/// resume; protocol violations are not retriable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BackendError {
    #[error("transport: {0}")]
    Transport(String),
    #[error("protocol: {0}")]
    Protocol(String),
    #[error("backend returned {got} items for {want} inputs")]
    LengthMismatch { want: usize, got: usize },
    #[error("scripted stub exhausted after {0} calls")]
    ScriptExhausted(usize),
}

/// Batch translation backend; output order matches input order.
pub trait TranslatorClient: Sync {
    fn translate(
        &self,
        texts: &[&str],
        src: &LanguageTag,
        tgt: &LanguageTag,
    ) -> Result<Vec<String>, BackendError>;
}

/// Batch (source, translation) quality scorer on the 0-100 scale; output
/// order matches input order.
pub trait ScorerClient: Sync {
    fn score(
        &self,
        pairs: &[(&str, &str)],
        src: &LanguageTag,
        tgt: &LanguageTag,
    ) -> Result<Vec<f64>, BackendError>;
}

fn check_len<T>(want: usize, got: Vec<T>) -> Result<Vec<T>, BackendError> {
    if got.len() == want {
        Ok(got)
    } else {
        Err(BackendError::LengthMismatch {
            want,
            got: got.len(),
        })
    }
}
