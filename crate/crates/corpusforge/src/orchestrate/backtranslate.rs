//! Iterative and paragraph-level back-translation.
//!
//! Each round translates the monolingual texts with that round's translator
//! (the factory models a retrained system per round), scores the results,
//! and the per-text argmax across rounds wins, earliest round on ties. A
//! failed round is skipped and recorded; selection proceeds over the rounds
//! that completed.

use serde::{Deserialize, Serialize};

use crate::corpus::{Passage, Provenance, SentencePair};
use crate::lang::LanguageTag;

use super::{BackendError, ScorerClient, TranslatorClient};

pub const DEFAULT_BT_ROUNDS: usize = 5;

/// Supplies the translator for each round.
pub trait TranslatorFactory {
    fn translator(&self, round: usize) -> Result<&dyn TranslatorClient, BackendError>;
}

/// A fixed list of clients, cycled per round; the one-client case models a
/// frozen system.
impl TranslatorFactory for Vec<&dyn TranslatorClient> {
    fn translator(&self, round: usize) -> Result<&dyn TranslatorClient, BackendError> {
        if self.is_empty() {
            return Err(BackendError::Protocol("no translators configured".into()));
        }
        Ok(self[round % self.len()])
    }
}

/// Audit trail for one input text across rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextAudit {
    /// Score per round; `None` where the round was skipped.
    pub round_scores: Vec<Option<f64>>,
    /// Winning round index, if any round completed.
    pub best_round: Option<usize>,
    pub best_score: Option<f64>,
}

/// Run-level audit: rounds attempted, rounds skipped, per-text trails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BtState {
    pub rounds: usize,
    pub failed_rounds: Vec<usize>,
    pub per_text: Vec<TextAudit>,
}

#[derive(Debug)]
pub struct BtOutcome {
    /// Selected pairs: generated translation as the source side, the
    /// monolingual text as the target side. Texts with no completed round
    /// are absent.
    pub pairs: Vec<SentencePair>,
    pub state: BtState,
}

/// Iterative back-translation over `rounds` rounds (the paper's setting is
/// five).
pub fn iterative_back_translate(
    texts: &[&str],
    mono_tag: &LanguageTag,
    out_tag: &LanguageTag,
    factory: &dyn TranslatorFactory,
    scorer: &dyn ScorerClient,
    rounds: usize,
) -> Result<BtOutcome, BackendError> {
    assert!(rounds >= 1, "rounds must be at least 1");
    let mut best: Vec<Option<(usize, f64, String)>> = vec![None; texts.len()];
    let mut audits: Vec<TextAudit> = texts
        .iter()
        .map(|_| TextAudit {
            round_scores: vec![None; rounds],
            best_round: None,
            best_score: None,
        })
        .collect();
    let mut failed_rounds = Vec::new();

    for round in 0..rounds {
        let round_result = (|| -> Result<(Vec<String>, Vec<f64>), BackendError> {
            let translator = factory.translator(round)?;
            let translations =
                super::check_len(texts.len(), translator.translate(texts, mono_tag, out_tag)?)?;
            let pairs: Vec<(&str, &str)> = texts
                .iter()
                .zip(&translations)
                .map(|(mono, gen)| (*mono, gen.as_str()))
                .collect();
            let scores = super::check_len(texts.len(), scorer.score(&pairs, mono_tag, out_tag)?)?;
            Ok((translations, scores))
        })();
        let (translations, scores) = match round_result {
            Ok(r) => r,
            Err(_) => {
                failed_rounds.push(round);
                continue;
            }
        };
        for (i, (translation, score)) in translations.into_iter().zip(scores).enumerate() {
            audits[i].round_scores[round] = Some(score);
            // Strict improvement only: ties stay with the earliest round.
            if best[i].as_ref().is_none_or(|(_, s, _)| score > *s) {
                best[i] = Some((round, score, translation));
            }
        }
    }

    let mut pairs = Vec::new();
    for (i, slot) in best.iter().enumerate() {
        if let Some((round, score, translation)) = slot {
            audits[i].best_round = Some(*round);
            audits[i].best_score = Some(*score);
            let mut pair = SentencePair::new(
                format!("bt-{i}"),
                out_tag.clone(),
                mono_tag.clone(),
                translation,
                texts[i],
                "general",
                Provenance::Backtranslated,
                None,
            )
            .map_err(|e| BackendError::Protocol(format!("generated pair invalid: {e}")))?;
            pair.score = Some(*score);
            pairs.push(pair);
        }
    }

    Ok(BtOutcome {
        pairs,
        state: BtState {
            rounds,
            failed_rounds,
            per_text: audits,
        },
    })
}

/// Back-translate passages sentence by sentence: every variant translator
/// produces a candidate per sentence, the best-scored candidate wins
/// (earliest variant on ties), and sentences are reassembled in their
/// original order within each passage.
pub fn paragraph_back_translate(
    passages: &[Passage],
    out_tag: &LanguageTag,
    variants: &[&dyn TranslatorClient],
    scorer: &dyn ScorerClient,
) -> Result<Vec<Passage>, BackendError> {
    if variants.is_empty() {
        return Err(BackendError::Protocol("no translators configured".into()));
    }
    let mut out = Vec::with_capacity(passages.len());
    for passage in passages {
        let sentences: Vec<&str> = passage.sentences.iter().map(String::as_str).collect();
        let mut best: Vec<Option<(f64, String)>> = vec![None; sentences.len()];
        let mut any_variant = false;
        for client in variants {
            let result = (|| -> Result<(Vec<String>, Vec<f64>), BackendError> {
                let translations = super::check_len(
                    sentences.len(),
                    client.translate(&sentences, &passage.tag, out_tag)?,
                )?;
                let pairs: Vec<(&str, &str)> = sentences
                    .iter()
                    .zip(&translations)
                    .map(|(s, t)| (*s, t.as_str()))
                    .collect();
                let scores =
                    super::check_len(sentences.len(), scorer.score(&pairs, &passage.tag, out_tag)?)?;
                Ok((translations, scores))
            })();
            let (translations, scores) = match result {
                Ok(r) => r,
                Err(_) => continue, // variant skipped, like a failed round
            };
            any_variant = true;
            for (i, (translation, score)) in translations.into_iter().zip(scores).enumerate() {
                if best[i].as_ref().is_none_or(|(s, _)| score > *s) {
                    best[i] = Some((score, translation));
                }
            }
        }
        if !any_variant {
            return Err(BackendError::Transport(format!(
                "every translator variant failed for passage {}",
                passage.id
            )));
        }
        let sentences: Vec<String> = best
            .into_iter()
            .map(|b| b.expect("every sentence scored by a surviving variant").1)
            .collect();
        out.push(Passage::new(
            passage.id.clone(),
            out_tag.clone(),
            sentences,
            passage.domain.clone(),
        )
        .map_err(|e| BackendError::Protocol(format!("generated passage invalid: {e}")))?);
    }
    Ok(out)
}
