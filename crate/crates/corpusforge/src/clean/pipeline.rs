//! Chunked composition of the cleaning stages with order-preserving output
//! and verdict accounting.
//!
//! Stages run in canonical order (length, language/script, markup, QE); the
//! first failing stage owns the rejection. The QE mean is computed per
//! (src_tag, tgt_tag) group within each chunk, over pairs that survived the
//! earlier stages, so the chunk size is part of a run's deterministic
//! contract. Per-pair stages may run in parallel; verdict and kept order is
//! always the input order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{CorpusStats, SentencePair};
use crate::orchestrate::{BackendError, ScorerClient};

use super::{
    language_script_filter, length_filter, markup_filter, qe_verdicts, FilterPolicy, Stage,
    Verdict, WordLanguageClassifier,
};

/// Where QE-stage scores come from.
pub enum QeSource<'a> {
    /// Score every surviving pair through a backend.
    Scorer(&'a dyn ScorerClient),
    /// Use scores already attached to the pairs; unscored pairs are
    /// rejected.
    Attached,
}

#[derive(Debug, Error)]
pub enum CleanError {
    #[error("qe stage enabled but no scorer or attached-score source configured")]
    QeNeedsSource,
    #[error("scorer failed: {0}")]
    Scorer(#[from] BackendError),
}

/// Output of one processed chunk, in input order.
#[derive(Debug, Default)]
pub struct ChunkOutcome {
    pub kept: Vec<SentencePair>,
    pub verdicts: Vec<Verdict>,
    pub stats: CorpusStats,
}

pub struct CleanPipeline<'a> {
    policy: FilterPolicy,
    classifier: &'a dyn WordLanguageClassifier,
    qe: Option<QeSource<'a>>,
}

impl<'a> CleanPipeline<'a> {
    /// Validates configuration up front: an enabled QE stage needs a score
    /// source before any pair is touched.
    pub fn new(
        policy: FilterPolicy,
        classifier: &'a dyn WordLanguageClassifier,
        qe: Option<QeSource<'a>>,
    ) -> Result<Self, CleanError> {
        if policy.stage_enabled(Stage::Qe) && qe.is_none() {
            return Err(CleanError::QeNeedsSource);
        }
        Ok(Self {
            policy,
            classifier,
            qe,
        })
    }

    pub fn policy(&self) -> &FilterPolicy {
        &self.policy
    }

    fn pre_qe_verdict(&self, pair: &SentencePair) -> Option<Verdict> {
        if self.policy.stage_enabled(Stage::Length) {
            let v = length_filter(pair, &self.policy);
            if !v.kept {
                return Some(v);
            }
        }
        if self.policy.stage_enabled(Stage::LanguageScript) {
            let v = language_script_filter(pair, self.classifier, &self.policy);
            if !v.kept {
                return Some(v);
            }
        }
        if self.policy.stage_enabled(Stage::Markup) {
            let v = markup_filter(pair);
            if !v.kept {
                return Some(v);
            }
        }
        None
    }

    /// Run all enabled stages over one chunk.
    pub fn process_chunk(&self, chunk: Vec<SentencePair>) -> Result<ChunkOutcome, CleanError> {
        let mut chunk = chunk;
        let pre: Vec<Option<Verdict>> = chunk
            .par_iter()
            .map(|p| self.pre_qe_verdict(p))
            .collect();

        let mut final_verdicts: Vec<Option<Verdict>> = pre;

        if self.policy.stage_enabled(Stage::Qe) {
            // Group surviving pairs per language pair; the QE mean is per
            // group.
            let mut groups: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();
            for (i, v) in final_verdicts.iter().enumerate() {
                if v.is_none() {
                    let key = (chunk[i].src_tag.to_string(), chunk[i].tgt_tag.to_string());
                    groups.entry(key).or_default().push(i);
                }
            }
            for indices in groups.values() {
                let scores: Vec<Option<f64>> = match self.qe.as_ref().expect("validated") {
                    QeSource::Attached => indices.iter().map(|&i| chunk[i].score).collect(),
                    QeSource::Scorer(scorer) => {
                        let texts: Vec<(&str, &str)> = indices
                            .iter()
                            .map(|&i| (chunk[i].src_text.as_str(), chunk[i].tgt_text.as_str()))
                            .collect();
                        let got = scorer.score(
                            &texts,
                            &chunk[indices[0]].src_tag,
                            &chunk[indices[0]].tgt_tag,
                        )?;
                        if got.len() != texts.len() {
                            return Err(BackendError::LengthMismatch {
                                want: texts.len(),
                                got: got.len(),
                            }
                            .into());
                        }
                        got.into_iter().map(Some).collect()
                    }
                };
                let entries: Vec<(String, Option<f64>)> = indices
                    .iter()
                    .zip(&scores)
                    .map(|(&i, s)| (chunk[i].id.clone(), *s))
                    .collect();
                let verdicts = qe_verdicts(&entries, self.policy.qe_margin);
                for ((&i, verdict), score) in indices.iter().zip(verdicts).zip(scores) {
                    if let Some(s) = score {
                        chunk[i].score = Some(s);
                    }
                    final_verdicts[i] = Some(verdict);
                }
            }
        }

        let mut out = ChunkOutcome::default();
        for (pair, verdict) in chunk.into_iter().zip(final_verdicts) {
            let verdict = verdict.unwrap_or_else(|| Verdict::kept(&pair.id));
            if verdict.kept {
                out.stats.record_kept();
                out.kept.push(pair);
            } else {
                out.stats
                    .record_rejected(verdict.reason.expect("rejected has reason").as_str());
            }
            out.verdicts.push(verdict);
        }
        Ok(out)
    }
}

/// Stream pairs through the cleaning stack chunk by chunk, pushing kept
/// pairs and verdicts to the sinks in input order. Returns run totals.
pub fn run_clean_pipeline<I>(
    pairs: I,
    policy: FilterPolicy,
    classifier: &dyn WordLanguageClassifier,
    qe: Option<QeSource<'_>>,
    mut on_kept: impl FnMut(SentencePair),
    mut on_verdict: impl FnMut(&Verdict),
) -> Result<CorpusStats, CleanError>
where
    I: IntoIterator<Item = SentencePair>,
{
    let chunk_size = policy.chunk_size.max(1);
    let pipeline = CleanPipeline::new(policy, classifier, qe)?;
    let mut stats = CorpusStats::default();
    let mut chunk = Vec::with_capacity(chunk_size);

    let flush = |chunk: &mut Vec<SentencePair>,
                     stats: &mut CorpusStats,
                     on_kept: &mut dyn FnMut(SentencePair),
                     on_verdict: &mut dyn FnMut(&Verdict)|
     -> Result<(), CleanError> {
        if chunk.is_empty() {
            return Ok(());
        }
        let outcome = pipeline.process_chunk(std::mem::take(chunk))?;
        stats.merge(&outcome.stats);
        for v in &outcome.verdicts {
            on_verdict(v);
        }
        for p in outcome.kept {
            on_kept(p);
        }
        Ok(())
    };

    for pair in pairs {
        chunk.push(pair);
        if chunk.len() >= chunk_size {
            flush(&mut chunk, &mut stats, &mut on_kept, &mut on_verdict)?;
        }
    }
    flush(&mut chunk, &mut stats, &mut on_kept, &mut on_verdict)?;
    Ok(stats)
}
