//! QE-similarity sentence alignment: score candidate (i, j) pairs inside a
//! diagonal band, then select a one-to-one, strictly monotone matching by
//! greedy best-score-first, keeping matches at or above the threshold.

use serde::{Deserialize, Serialize};

use crate::lang::LanguageTag;

use super::{BackendError, ScorerClient};

#[derive(Debug, Clone)]
pub struct AlignOptions {
    /// Candidates are (i, j) with j within this distance of the scaled
    /// diagonal.
    pub band_width: usize,
    /// Matches scoring below this are dropped after matching.
    pub threshold: f64,
}

impl Default for AlignOptions {
    fn default() -> Self {
        Self {
            band_width: 5,
            threshold: 0.0,
        }
    }
}

/// One accepted sentence alignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    pub src_idx: usize,
    pub tgt_idx: usize,
    pub score: f64,
}

/// Align source and target sentence lists with a scorer.
///
/// The result is sorted by `src_idx`, one-to-one, and strictly increasing
/// in both indices. A scorer failure aborts the call; partial results are
/// discarded.
pub fn align_sentences(
    src: &[&str],
    tgt: &[&str],
    src_tag: &LanguageTag,
    tgt_tag: &LanguageTag,
    scorer: &dyn ScorerClient,
    options: &AlignOptions,
) -> Result<Vec<Alignment>, BackendError> {
    if src.is_empty() || tgt.is_empty() {
        return Ok(Vec::new());
    }

    // Candidate pairs inside the band, i-major order.
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for i in 0..src.len() {
        let center = i * tgt.len() / src.len();
        let lo = center.saturating_sub(options.band_width);
        let hi = (center + options.band_width).min(tgt.len() - 1);
        for j in lo..=hi {
            candidates.push((i, j));
        }
    }

    let texts: Vec<(&str, &str)> = candidates.iter().map(|&(i, j)| (src[i], tgt[j])).collect();
    let scores = scorer.score(&texts, src_tag, tgt_tag)?;
    if scores.len() != candidates.len() {
        return Err(BackendError::LengthMismatch {
            want: candidates.len(),
            got: scores.len(),
        });
    }

    // Greedy best-score-first; ties break toward the smaller (i, j).
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("scores are not NaN")
            .then(candidates[a].cmp(&candidates[b]))
    });

    let mut used_src = vec![false; src.len()];
    let mut used_tgt = vec![false; tgt.len()];
    // Accepted matches kept sorted by src index for the monotonicity probe.
    let mut accepted: Vec<(usize, usize, f64)> = Vec::new();
    for idx in order {
        let (i, j) = candidates[idx];
        if used_src[i] || used_tgt[j] {
            continue;
        }
        let pos = accepted.partition_point(|&(ai, _, _)| ai < i);
        let left_ok = pos == 0 || accepted[pos - 1].1 < j;
        let right_ok = pos == accepted.len() || accepted[pos].1 > j;
        if !(left_ok && right_ok) {
            continue;
        }
        accepted.insert(pos, (i, j, scores[idx]));
        used_src[i] = true;
        used_tgt[j] = true;
    }

    Ok(accepted
        .into_iter()
        .filter(|&(_, _, s)| s >= options.threshold)
        .map(|(src_idx, tgt_idx, score)| Alignment {
            src_idx,
            tgt_idx,
            score,
        })
        .collect())
}
