//! Self-contained evaluation metrics: corpus BLEU-4, chrF (recall-weighted,
//! beta 3), TER with greedy block shifts, token-level span F1, and Spearman
//! rank correlation.
//!
//! All word-level metrics share the crate tokenizer ([`crate::text::tokens`])
//! so span coordinates agree with the perturbation engine and the error-span
//! annotations. Every function here is pure.

use std::collections::HashMap;

use thiserror::Error;

use crate::text::{tokens, TokenSpan};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("candidates and references differ in length ({candidates} vs {references})")]
    LengthMismatch { candidates: usize, references: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("reference has no tokens")]
    EmptyReference,
    #[error("span [{start}, {end}) invalid for length {len}")]
    BadSpan { start: usize, end: usize, len: usize },
    #[error("spans must be sorted and non-overlapping")]
    UnsortedSpans,
    #[error("correlation undefined for constant input")]
    ConstantInput,
}

const BLEU_MAX_N: usize = 4;
const BLEU_EPSILON: f64 = 1e-9;
const CHRF_BETA: f64 = 3.0;
const CHRF_MAX_N: usize = 6;
const TER_MAX_SHIFT_LEN: usize = 10;

fn ngram_counts(toks: &[String], n: usize) -> HashMap<&[String], u32> {
    let mut counts = HashMap::new();
    if toks.len() >= n {
        for w in toks.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

/// Corpus-level BLEU-4 in `[0, 100]`: geometric mean of clipped n-gram
/// precisions (n = 1..4) times the brevity penalty `exp(1 - r/c)` for c < r.
/// Zero (or empty) precisions are smoothed to 1e-9.
pub fn bleu<S: AsRef<str>>(candidates: &[S], references: &[S]) -> Result<f64, MetricError> {
    if candidates.len() != references.len() {
        return Err(MetricError::LengthMismatch {
            candidates: candidates.len(),
            references: references.len(),
        });
    }
    if candidates.is_empty() {
        return Err(MetricError::EmptyInput);
    }

    let mut matched = [0u64; BLEU_MAX_N];
    let mut total = [0u64; BLEU_MAX_N];
    let mut cand_len = 0u64;
    let mut ref_len = 0u64;

    for (cand, reference) in candidates.iter().zip(references) {
        let cand = tokens(cand.as_ref());
        let reference = tokens(reference.as_ref());
        cand_len += cand.len() as u64;
        ref_len += reference.len() as u64;
        for n in 1..=BLEU_MAX_N {
            let ref_counts = ngram_counts(&reference, n);
            for (gram, count) in ngram_counts(&cand, n) {
                let clip = ref_counts.get(gram).copied().unwrap_or(0);
                matched[n - 1] += u64::from(count.min(clip));
            }
            total[n - 1] += cand.len().saturating_sub(n - 1) as u64;
        }
    }

    if cand_len == 0 {
        return Ok(0.0);
    }
    // Orders where the corpus has no candidate n-grams at all are skipped;
    // an order with candidate n-grams but zero matches gets the epsilon.
    let mut log_sum = 0.0;
    let mut orders = 0u32;
    for n in 0..BLEU_MAX_N {
        if total[n] == 0 {
            continue;
        }
        orders += 1;
        let p = if matched[n] == 0 {
            BLEU_EPSILON
        } else {
            matched[n] as f64 / total[n] as f64
        };
        log_sum += p.ln();
    }
    if orders == 0 {
        return Ok(0.0);
    }
    let brevity = if cand_len < ref_len {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    } else {
        1.0
    };
    Ok(100.0 * brevity * (log_sum / f64::from(orders)).exp())
}

/// chrF3 in `[0, 100]`: character n-gram F-beta (beta = 3, recall-weighted)
/// averaged over n = 1..6, whitespace removed before extraction.
pub fn chrf(candidate: &str, reference: &str) -> f64 {
    chrf_with(candidate, reference, CHRF_BETA, CHRF_MAX_N)
}

/// chrF with explicit beta and maximum n-gram order. Orders where neither
/// side has any n-grams are skipped rather than averaged as zero, so the
/// identity case scores 100 for short strings too.
pub fn chrf_with(candidate: &str, reference: &str, beta: f64, max_n: usize) -> f64 {
    let cand: Vec<char> = candidate.chars().filter(|c| !c.is_whitespace()).collect();
    let refr: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();

    let char_ngrams = |chars: &[char], n: usize| -> HashMap<Vec<char>, u32> {
        let mut counts = HashMap::new();
        if chars.len() >= n {
            for w in chars.windows(n) {
                *counts.entry(w.to_vec()).or_insert(0) += 1;
            }
        }
        counts
    };

    let beta2 = beta * beta;
    let mut f_sum = 0.0;
    let mut orders = 0u32;
    for n in 1..=max_n {
        let cand_counts = char_ngrams(&cand, n);
        let ref_counts = char_ngrams(&refr, n);
        let cand_total: u32 = cand_counts.values().sum();
        let ref_total: u32 = ref_counts.values().sum();
        if cand_total == 0 && ref_total == 0 {
            continue;
        }
        orders += 1;
        let matched: u32 = cand_counts
            .iter()
            .map(|(gram, c)| c.min(ref_counts.get(gram).unwrap_or(&0)))
            .sum();
        if matched == 0 {
            continue;
        }
        let precision = f64::from(matched) / f64::from(cand_total);
        let recall = f64::from(matched) / f64::from(ref_total);
        f_sum += (1.0 + beta2) * precision * recall / (beta2 * precision + recall);
    }
    if orders == 0 {
        // Both strings whitespace-only; equal means perfect.
        return if cand == refr { 100.0 } else { 0.0 };
    }
    100.0 * f_sum / f64::from(orders)
}

fn levenshtein(a: &[String], b: &[String]) -> u32 {
    let mut prev: Vec<u32> = (0..=b.len() as u32).collect();
    let mut cur = vec![0u32; b.len() + 1];
    for (i, ta) in a.iter().enumerate() {
        cur[0] = i as u32 + 1;
        for (j, tb) in b.iter().enumerate() {
            let sub = prev[j] + u32::from(ta != tb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Translation Error Rate as a percentage of reference length (may exceed
/// 100): minimum insertions, deletions, substitutions, and block shifts
/// (cost 1 each) turning the hypothesis into the reference, with shifts
/// found by the standard greedy heuristic.
pub fn ter(hypothesis: &str, reference: &str) -> Result<f64, MetricError> {
    let reference = tokens(reference);
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    let mut hyp = tokens(hypothesis);

    let mut shifts = 0u32;
    let mut best_dist = levenshtein(&hyp, &reference);
    while best_dist > 0 {
        let mut best: Option<(Vec<String>, u32)> = None;
        // Candidate blocks are hypothesis spans that occur verbatim in the
        // reference; each is tried at every landing position.
        for start in 0..hyp.len() {
            for len in 1..=TER_MAX_SHIFT_LEN.min(hyp.len() - start) {
                let block = &hyp[start..start + len];
                if !reference.windows(len).any(|w| w == block) {
                    continue;
                }
                let mut rest: Vec<String> = Vec::with_capacity(hyp.len() - len);
                rest.extend_from_slice(&hyp[..start]);
                rest.extend_from_slice(&hyp[start + len..]);
                for pos in 0..=rest.len() {
                    if pos == start {
                        continue;
                    }
                    let mut shifted = Vec::with_capacity(hyp.len());
                    shifted.extend_from_slice(&rest[..pos]);
                    shifted.extend_from_slice(block);
                    shifted.extend_from_slice(&rest[pos..]);
                    let d = levenshtein(&shifted, &reference);
                    if d < best.as_ref().map_or(best_dist, |(_, bd)| *bd) {
                        best = Some((shifted, d));
                    }
                }
            }
        }
        match best {
            Some((shifted, d)) => {
                hyp = shifted;
                shifts += 1;
                best_dist = d;
            }
            None => break,
        }
    }

    Ok(100.0 * f64::from(best_dist + shifts) / reference.len() as f64)
}

/// A sorted set of non-overlapping `[start, end)` token intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpanSet {
    spans: Vec<TokenSpan>,
}

impl SpanSet {
    /// Validate that spans are sorted, non-overlapping, and non-empty.
    pub fn new(spans: Vec<TokenSpan>) -> Result<Self, MetricError> {
        for w in spans.windows(2) {
            if w[1].start < w[0].end {
                return Err(MetricError::UnsortedSpans);
            }
        }
        if spans.iter().any(|s| s.end <= s.start) {
            return Err(MetricError::UnsortedSpans);
        }
        Ok(Self { spans })
    }

    /// Sort and merge arbitrary intervals into canonical form.
    pub fn from_unsorted(mut spans: Vec<TokenSpan>) -> Self {
        spans.retain(|s| s.end > s.start);
        spans.sort_unstable();
        let mut merged: Vec<TokenSpan> = Vec::with_capacity(spans.len());
        for s in spans {
            match merged.last_mut() {
                Some(last) if s.start <= last.end => last.end = last.end.max(s.end),
                _ => merged.push(s),
            }
        }
        Self { spans: merged }
    }

    pub fn spans(&self) -> &[TokenSpan] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    fn covered(&self) -> impl Iterator<Item = usize> + '_ {
        self.spans.iter().flat_map(|s| s.start..s.end)
    }

    fn max_end(&self) -> usize {
        self.spans.last().map_or(0, |s| s.end)
    }
}

/// Token-level span F1 in `[0, 1]`: precision/recall over covered token
/// indices. Both sets empty scores 1.0; exactly one empty scores 0.0.
pub fn span_f1(predicted: &SpanSet, gold: &SpanSet, text_len: usize) -> Result<f64, MetricError> {
    for set in [predicted, gold] {
        if set.max_end() > text_len {
            let s = set.spans.last().unwrap();
            return Err(MetricError::BadSpan {
                start: s.start,
                end: s.end,
                len: text_len,
            });
        }
    }
    let pred: std::collections::HashSet<usize> = predicted.covered().collect();
    let gold: std::collections::HashSet<usize> = gold.covered().collect();
    if pred.is_empty() && gold.is_empty() {
        return Ok(1.0);
    }
    if pred.is_empty() || gold.is_empty() {
        return Ok(0.0);
    }
    let inter = pred.intersection(&gold).count() as f64;
    let precision = inter / pred.len() as f64;
    let recall = inter / gold.len() as f64;
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}

fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("no NaN in rank input"));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // 1-based ranks, ties get the average rank of the run.
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation in `[-1, 1]`: Pearson correlation of
/// average-tie ranks. Errors on constant inputs, where the rank variance
/// is zero and the coefficient is undefined.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64, MetricError> {
    if xs.len() != ys.len() {
        return Err(MetricError::LengthMismatch {
            candidates: xs.len(),
            references: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(MetricError::EmptyInput);
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let n = rx.len() as f64;
    let mean_x = rx.iter().sum::<f64>() / n;
    let mean_y = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mean_x) * (b - mean_y);
        var_x += (a - mean_x).powi(2);
        var_y += (b - mean_y).powi(2);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(MetricError::ConstantInput);
    }
    Ok(cov / (var_x * var_y).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bleu_identity_is_100() {
        let rows = ["the cat sat", "नमस्ते दुनिया।"];
        assert_eq!(bleu(&rows, &rows).unwrap(), 100.0);
    }

    #[test]
    fn bleu_disjoint_is_epsilon() {
        let got = bleu(&["aa bb cc dd"], &["xx yy zz ww"]).unwrap();
        assert!(got < 1e-6, "{got}");
    }

    #[test]
    fn bleu_short_candidate_matches_hand_oracle() {
        // cand "the cat sat" (3 toks) vs ref "the cat sat on the mat" (6):
        // p1 = 3/3, p2 = 2/2, p3 = 1/1, no candidate 4-grams (order skipped);
        // BP = exp(1 - 6/3). Frozen from the hand computation.
        let got = bleu(&["the cat sat"], &["the cat sat on the mat"]).unwrap();
        let want = 100.0 * (1.0f64 - 2.0).exp();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        assert!((got - 36.787_944_117_144_23).abs() < 1e-9, "{got}");
    }

    #[test]
    fn bleu_zero_match_order_uses_epsilon() {
        // Shared unigrams/bigrams but no shared trigram: p3 = epsilon.
        let got = bleu(&["a b c x e"], &["a b q c e"]).unwrap();
        // p1 = 4/5, p2 = 1/4, p3 = eps, p4 = eps.
        let want = 100.0
            * ((4.0f64 / 5.0).ln() / 4.0 + (1.0f64 / 4.0).ln() / 4.0
                + BLEU_EPSILON.ln() / 2.0)
                .exp();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn bleu_is_order_invariant() {
        let cands = ["a b c", "d e f", "g h"];
        let refs = ["a b x", "d e f", "g z"];
        let fwd = bleu(&cands, &refs).unwrap();
        let rev = bleu(
            &[cands[2], cands[0], cands[1]],
            &[refs[2], refs[0], refs[1]],
        )
        .unwrap();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn bleu_length_mismatch_errors() {
        assert!(matches!(
            bleu(&["a"], &["a", "b"]),
            Err(MetricError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn chrf_identity_and_disjoint() {
        assert_eq!(chrf("abcd", "abcd"), 100.0);
        assert_eq!(chrf("ab", "ab"), 100.0);
        assert_eq!(chrf("abcd", "wxyz"), 0.0);
    }

    #[test]
    fn chrf_small_case_matches_oracle() {
        // "abcd" vs "abce": F3 per order = 3/4, 2/3, 1/2, 0; avg = 23/48.
        let got = chrf("abcd", "abce");
        let want = 100.0 * (23.0 / 48.0);
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn chrf_is_not_symmetric() {
        // Recall weighting: a witness pair where the two directions differ.
        let a = chrf("the cat", "the cat sat on the mat");
        let b = chrf("the cat sat on the mat", "the cat");
        assert_ne!(a, b);
    }

    #[test]
    fn ter_identity_and_single_substitution() {
        assert_eq!(ter("a b c d e", "a b c d e").unwrap(), 0.0);
        assert_eq!(ter("a b x d e", "a b c d e").unwrap(), 20.0);
    }

    #[test]
    fn ter_zero_iff_equal_tokens() {
        assert_eq!(ter("a  b\tc", "a b c").unwrap(), 0.0);
        assert!(ter("a b", "a b c").unwrap() > 0.0);
    }

    #[test]
    fn ter_counts_block_shift_as_one_edit() {
        // "e f a b c d" -> shift "e f" to the end: 1 shift, 0 remaining edits.
        let got = ter("e f a b c d", "a b c d e f").unwrap();
        assert_eq!(got, 100.0 / 6.0);
    }

    #[test]
    fn ter_can_exceed_100() {
        let got = ter("x y z w v u q r", "a").unwrap();
        assert!(got > 100.0);
    }

    #[test]
    fn ter_empty_reference_errors() {
        assert!(matches!(ter("a", "   "), Err(MetricError::EmptyReference)));
    }

    #[test]
    fn span_f1_cases() {
        let s = |v: Vec<(usize, usize)>| {
            SpanSet::new(v.into_iter().map(|(a, b)| TokenSpan::new(a, b)).collect()).unwrap()
        };
        assert_eq!(span_f1(&s(vec![(1, 3)]), &s(vec![(1, 3)]), 5).unwrap(), 1.0);
        assert_eq!(span_f1(&s(vec![(0, 1)]), &s(vec![(2, 3)]), 5).unwrap(), 0.0);
        // predicted {1,2}, gold {2,3}: P = R = 0.5 -> F1 = 0.5
        assert_eq!(span_f1(&s(vec![(1, 3)]), &s(vec![(2, 4)]), 5).unwrap(), 0.5);
        assert_eq!(span_f1(&s(vec![]), &s(vec![]), 5).unwrap(), 1.0);
        assert_eq!(span_f1(&s(vec![(0, 1)]), &s(vec![]), 5).unwrap(), 0.0);
    }

    #[test]
    fn span_f1_rejects_out_of_bounds() {
        let pred = SpanSet::new(vec![TokenSpan::new(3, 7)]).unwrap();
        let gold = SpanSet::new(vec![]).unwrap();
        assert!(matches!(
            span_f1(&pred, &gold, 5),
            Err(MetricError::BadSpan { .. })
        ));
    }

    #[test]
    fn span_set_normalizes() {
        let set = SpanSet::from_unsorted(vec![
            TokenSpan::new(4, 6),
            TokenSpan::new(1, 2),
            TokenSpan::new(2, 4),
            TokenSpan::new(9, 9),
        ]);
        assert_eq!(set.spans(), &[TokenSpan::new(1, 6)]);
        assert!(SpanSet::new(vec![TokenSpan::new(2, 2)]).is_err());
        assert!(SpanSet::new(vec![TokenSpan::new(2, 4), TokenSpan::new(3, 5)]).is_err());
    }

    #[test]
    fn spearman_basics() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(spearman(&xs, &xs).unwrap(), 1.0);
        assert_eq!(spearman(&xs, &[4.0, 3.0, 2.0, 1.0]).unwrap(), -1.0);
        // No ties: matches 1 - 6*sum(d^2)/(n(n^2-1)) = 0.8.
        let got = spearman(&xs, &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((got - 0.8).abs() < 1e-12, "{got}");
    }

    #[test]
    fn spearman_constant_is_undefined() {
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(MetricError::ConstantInput)
        ));
    }

    #[test]
    fn spearman_handles_ties_with_average_ranks() {
        // xs ranks: [1.5, 1.5, 3]; hand-computed Pearson over ranks.
        let got = spearman(&[5.0, 5.0, 9.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((got - 0.866_025_403_784_438_6).abs() < 1e-12, "{got}");
    }
}
