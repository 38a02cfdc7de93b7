//! Pivot translation: turn an X<->pivot corpus into synthetic X<->target
//! pairs by translating the pivot side, scoring the results, and keeping
//! pairs at or above the batch-mean QE score.

use thiserror::Error;

use crate::corpus::{Provenance, SentencePair};
use crate::lang::LanguageTag;

use super::checkpoint::{Checkpoint, CheckpointBatch};
use super::{BackendError, ScorerClient, TranslatorClient};

#[derive(Debug, Clone, Default)]
pub struct PivotOptions {
    /// Backend sub-batch size; 0 means one batch for everything.
    pub batch_size: usize,
    /// When set, completed sub-batches are persisted and a re-run resumes
    /// from them.
    pub checkpoint: Option<Checkpoint>,
}

#[derive(Debug, Error)]
pub enum PivotError {
    #[error("batch {batch} failed (resume with the checkpoint): {source}")]
    Batch {
        batch: usize,
        #[source]
        source: BackendError,
    },
    #[error("pair {id}: neither side carries the pivot tag {pivot}")]
    NoPivotSide { id: String, pivot: String },
    #[error("checkpoint: {0}")]
    Checkpoint(#[from] std::io::Error),
    #[error("checkpoint batch {batch} has {got} items, want {want}")]
    CheckpointShape { batch: usize, want: usize, got: usize },
}

/// Synthetic pairs plus the threshold provenance the filter used.
#[derive(Debug)]
pub struct PivotOutcome {
    pub pairs: Vec<SentencePair>,
    /// The batch-mean score used as the keep threshold.
    pub threshold: f64,
    /// How many scored pairs the mean was computed over.
    pub scored: usize,
}

/// Translate the pivot side of each pair into `target_tag`, score the
/// (X side, generated target) pairs, and keep those scoring at or above the
/// mean. Output pairs carry `Provenance::Pivot` and their score.
pub fn pivot_translate(
    pairs: &[SentencePair],
    pivot_tag: &LanguageTag,
    target_tag: &LanguageTag,
    translator: &dyn TranslatorClient,
    scorer: &dyn ScorerClient,
    options: &PivotOptions,
) -> Result<PivotOutcome, PivotError> {
    if pairs.is_empty() {
        return Ok(PivotOutcome {
            pairs: Vec::new(),
            threshold: 0.0,
            scored: 0,
        });
    }

    // Split each pair into (X tag, X text, pivot text).
    let mut x_sides: Vec<(&LanguageTag, &str, &str)> = Vec::with_capacity(pairs.len());
    for p in pairs {
        if &p.tgt_tag == pivot_tag {
            x_sides.push((&p.src_tag, &p.src_text, &p.tgt_text));
        } else if &p.src_tag == pivot_tag {
            x_sides.push((&p.tgt_tag, &p.tgt_text, &p.src_text));
        } else {
            return Err(PivotError::NoPivotSide {
                id: p.id.clone(),
                pivot: pivot_tag.to_string(),
            });
        }
    }

    let batch_size = if options.batch_size == 0 {
        pairs.len()
    } else {
        options.batch_size
    };
    let completed = match &options.checkpoint {
        Some(cp) => cp.load()?,
        None => Default::default(),
    };

    let mut translations: Vec<String> = Vec::with_capacity(pairs.len());
    let mut scores: Vec<f64> = Vec::with_capacity(pairs.len());
    for (batch_idx, chunk) in x_sides.chunks(batch_size).enumerate() {
        if let Some(done) = completed.get(&batch_idx) {
            if done.translations.len() != chunk.len() || done.scores.len() != chunk.len() {
                return Err(PivotError::CheckpointShape {
                    batch: batch_idx,
                    want: chunk.len(),
                    got: done.translations.len(),
                });
            }
            translations.extend(done.translations.iter().cloned());
            scores.extend(done.scores.iter().copied());
            continue;
        }
        let pivot_texts: Vec<&str> = chunk.iter().map(|(_, _, p)| *p).collect();
        let generated = translator
            .translate(&pivot_texts, pivot_tag, target_tag)
            .and_then(|g| super::check_len(pivot_texts.len(), g))
            .map_err(|source| PivotError::Batch {
                batch: batch_idx,
                source,
            })?;
        let score_input: Vec<(&str, &str)> = chunk
            .iter()
            .zip(&generated)
            .map(|((_, x_text, _), gen)| (*x_text, gen.as_str()))
            .collect();
        // Scoring runs per X tag; within one corpus the X side is uniform,
        // so use the first pair's tag.
        let batch_scores = scorer
            .score(&score_input, x_sides[0].0, target_tag)
            .and_then(|s| super::check_len(score_input.len(), s))
            .map_err(|source| PivotError::Batch {
                batch: batch_idx,
                source,
            })?;
        if let Some(cp) = &options.checkpoint {
            cp.append(&CheckpointBatch {
                batch: batch_idx,
                translations: generated.clone(),
                scores: batch_scores.clone(),
            })?;
        }
        translations.extend(generated);
        scores.extend(batch_scores);
    }

    // Threshold over the full run, computed before any rejection.
    let threshold = scores.iter().sum::<f64>() / scores.len() as f64;
    let mut out = Vec::new();
    for (i, ((x_tag, x_text, _), translation)) in x_sides.iter().zip(&translations).enumerate() {
        if scores[i] < threshold {
            continue;
        }
        let mut pair = SentencePair::new(
            format!("{}-pivot", pairs[i].id),
            (*x_tag).clone(),
            target_tag.clone(),
            x_text,
            translation,
            pairs[i].domain.clone(),
            Provenance::Pivot,
            None,
        )
        .map_err(|e| PivotError::Batch {
            batch: i / batch_size,
            source: BackendError::Protocol(format!("generated pair invalid: {e}")),
        })?;
        pair.score = Some(scores[i]);
        out.push(pair);
    }

    Ok(PivotOutcome {
        pairs: out,
        threshold,
        scored: scores.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orchestrate::stub::{FailingTranslator, HashScorer, MarkerTranslator};

    fn corpus(n: usize) -> Vec<SentencePair> {
        (0..n)
            .map(|i| {
                SentencePair::new(
                    i.to_string(),
                    "Dravidian+tel_Telu".parse().unwrap(),
                    "WestGermanic+eng_Latn".parse().unwrap(),
                    &format!("టెక్స్ట్ {i}"),
                    &format!("pivot text {i}"),
                    "",
                    Provenance::Mined,
                    None,
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn empty_input_empty_output() {
        let pivot: LanguageTag = "WestGermanic+eng_Latn".parse().unwrap();
        let target: LanguageTag = "CentralIndic+hin_Deva".parse().unwrap();
        let out = pivot_translate(
            &[],
            &pivot,
            &target,
            &MarkerTranslator::new("mt"),
            &HashScorer { seed: 1 },
            &PivotOptions::default(),
        )
        .unwrap();
        assert!(out.pairs.is_empty());
        assert_eq!(out.scored, 0);
    }

    #[test]
    fn kept_pairs_score_at_least_the_mean() {
        let pivot: LanguageTag = "WestGermanic+eng_Latn".parse().unwrap();
        let target: LanguageTag = "CentralIndic+hin_Deva".parse().unwrap();
        let pairs = corpus(100);
        let out = pivot_translate(
            &pairs,
            &pivot,
            &target,
            &MarkerTranslator::new("mt"),
            &HashScorer { seed: 3 },
            &PivotOptions::default(),
        )
        .unwrap();
        assert_eq!(out.scored, 100);
        assert!(!out.pairs.is_empty() && out.pairs.len() < 100);
        for p in &out.pairs {
            assert!(p.score.unwrap() >= out.threshold);
            assert_eq!(p.provenance, Provenance::Pivot);
            assert_eq!(p.tgt_tag, target);
        }
    }

    #[test]
    fn failed_batch_resumes_from_checkpoint() {
        let pivot: LanguageTag = "WestGermanic+eng_Latn".parse().unwrap();
        let target: LanguageTag = "CentralIndic+hin_Deva".parse().unwrap();
        let pairs = corpus(10);
        let dir = tempfile::tempdir().unwrap();
        let cp = Checkpoint::new(dir.path().join("cp.jsonl"));

        // Seed the checkpoint with batches 0..=1 from a working run.
        let warm = pivot_translate(
            &pairs[..6],
            &pivot,
            &target,
            &MarkerTranslator::new("mt"),
            &HashScorer { seed: 3 },
            &PivotOptions {
                batch_size: 3,
                checkpoint: Some(cp.clone()),
            },
        )
        .unwrap();
        assert_eq!(warm.scored, 6);

        // A dead backend still fails the uncovered batches...
        let err = pivot_translate(
            &pairs,
            &pivot,
            &target,
            &FailingTranslator,
            &HashScorer { seed: 3 },
            &PivotOptions {
                batch_size: 3,
                checkpoint: Some(cp.clone()),
            },
        )
        .unwrap_err();
        assert!(matches!(err, PivotError::Batch { batch: 2, .. }));

        // ...but a recovered run completes and matches an uninterrupted one.
        let resumed = pivot_translate(
            &pairs,
            &pivot,
            &target,
            &MarkerTranslator::new("mt"),
            &HashScorer { seed: 3 },
            &PivotOptions {
                batch_size: 3,
                checkpoint: Some(cp),
            },
        )
        .unwrap();
        let fresh = pivot_translate(
            &pairs,
            &pivot,
            &target,
            &MarkerTranslator::new("mt"),
            &HashScorer { seed: 3 },
            &PivotOptions {
                batch_size: 3,
                checkpoint: None,
            },
        )
        .unwrap();
        assert_eq!(resumed.pairs, fresh.pairs);
        assert_eq!(resumed.threshold, fresh.threshold);
    }

    #[test]
    fn pivot_side_may_be_source() {
        let pivot: LanguageTag = "WestGermanic+eng_Latn".parse().unwrap();
        let target: LanguageTag = "CentralIndic+hin_Deva".parse().unwrap();
        let flipped: Vec<SentencePair> = corpus(4)
            .into_iter()
            .map(|p| SentencePair {
                src_tag: p.tgt_tag.clone(),
                tgt_tag: p.src_tag.clone(),
                src_text: p.tgt_text.clone(),
                tgt_text: p.src_text.clone(),
                ..p
            })
            .collect();
        let out = pivot_translate(
            &flipped,
            &pivot,
            &target,
            &MarkerTranslator::new("mt"),
            &HashScorer { seed: 9 },
            &PivotOptions::default(),
        )
        .unwrap();
        for p in &out.pairs {
            assert_eq!(p.src_tag.to_string(), "Dravidian+tel_Telu");
            assert!(p.tgt_text.starts_with("mt:hin:pivot text"));
        }
    }
}
