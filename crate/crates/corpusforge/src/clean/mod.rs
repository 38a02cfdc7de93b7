//! The four-stage parallel-corpus cleaning stack: length deltas, word-level
//! language/script agreement, markup balance, and QE-score thresholding,
//! composed into a chunked, order-preserving pipeline with full verdict
//! accounting.

mod pipeline;

pub use pipeline::{run_clean_pipeline, CleanError, CleanPipeline, ChunkOutcome, QeSource};

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::SentencePair;
use crate::lang::{dominant_script, LanguageTag, Registry};

/// Pipeline stages in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Length,
    LanguageScript,
    Markup,
    Qe,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Length, Stage::LanguageScript, Stage::Markup, Stage::Qe];
}

/// Why a pair was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    Length,
    LanguageScript,
    Markup,
    QeScore,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::Length => "length",
            RejectReason::LanguageScript => "language_script",
            RejectReason::Markup => "markup",
            RejectReason::QeScore => "qe_score",
        }
    }
}

/// Thresholds for the cleaning stack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterPolicy {
    /// Maximum |source words - target words|.
    pub max_word_delta: u64,
    /// Maximum |source chars - target chars|; when absent it derives per
    /// pair as 10 x the mean word length of the side with fewer characters.
    pub max_char_delta: Option<u64>,
    /// A side passes when more than this fraction of its classified words
    /// match the declared tag (strict majority by default).
    pub majority_fraction: f64,
    /// QE threshold is the batch mean minus this margin.
    pub qe_margin: f64,
    /// Enabled stages, applied in canonical order.
    pub stages: Vec<Stage>,
    /// Pairs per processing chunk; the QE mean is computed per chunk, so
    /// this is part of the deterministic contract of a run.
    pub chunk_size: usize,
}

impl Default for FilterPolicy {
    fn default() -> Self {
        Self {
            max_word_delta: 10,
            max_char_delta: None,
            majority_fraction: 0.5,
            qe_margin: 10.0,
            stages: Stage::ALL.to_vec(),
            chunk_size: 10_000,
        }
    }
}

impl FilterPolicy {
    pub fn stage_enabled(&self, stage: Stage) -> bool {
        self.stages.contains(&stage)
    }
}

/// Per-pair keep/reject decision. `reason` is present exactly when the pair
/// was rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: String,
    pub kept: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<RejectReason>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Verdict {
    pub fn kept(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kept: true,
            reason: None,
            detail: String::new(),
        }
    }

    pub fn rejected(id: impl Into<String>, reason: RejectReason, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kept: false,
            reason: Some(reason),
            detail: detail.into(),
        }
    }
}

/// Classifies one word against candidate language tags. Implementations
/// must be deterministic for fixed inputs; `None` means unknown.
pub trait WordLanguageClassifier: Sync {
    fn classify(&self, word: &str, candidates: &[LanguageTag]) -> Option<LanguageTag>;
}

/// Built-in classifier backed by the script-block tables: a word belongs to
/// the candidate (or failing that, the first registry entry) whose script
/// dominates its letters.
pub struct ScriptClassifier<'r> {
    registry: &'r Registry,
}

impl<'r> ScriptClassifier<'r> {
    pub fn new(registry: &'r Registry) -> Self {
        Self { registry }
    }
}

impl WordLanguageClassifier for ScriptClassifier<'_> {
    fn classify(&self, word: &str, candidates: &[LanguageTag]) -> Option<LanguageTag> {
        let share = dominant_script(word)?;
        let code = share.script.code();
        candidates
            .iter()
            .find(|t| t.script() == code)
            .cloned()
            .or_else(|| self.registry.entries_with_script(code).next().map(|e| e.tag.clone()))
    }
}

fn word_count(text: &str) -> u64 {
    text.split_whitespace().count() as u64
}

fn char_count(text: &str) -> u64 {
    text.chars().count() as u64
}

/// Keep iff the word-count delta and the character-count delta both stay
/// within policy. Symmetric in source and target.
pub fn length_filter(pair: &SentencePair, policy: &FilterPolicy) -> Verdict {
    let (sw, tw) = (word_count(&pair.src_text), word_count(&pair.tgt_text));
    let word_delta = sw.abs_diff(tw);
    if word_delta > policy.max_word_delta {
        return Verdict::rejected(
            &pair.id,
            RejectReason::Length,
            format!("word delta {word_delta} > {}", policy.max_word_delta),
        );
    }
    let (sc, tc) = (char_count(&pair.src_text), char_count(&pair.tgt_text));
    let char_delta = sc.abs_diff(tc) as f64;
    let char_limit = match policy.max_char_delta {
        Some(limit) => limit as f64,
        None => {
            // 10 x mean word length of the side with fewer characters.
            let (chars, words) = if sc <= tc { (sc, sw) } else { (tc, tw) };
            10.0 * chars as f64 / words.max(1) as f64
        }
    };
    if char_delta > char_limit {
        return Verdict::rejected(
            &pair.id,
            RejectReason::Length,
            format!("char delta {char_delta} > {char_limit}"),
        );
    }
    Verdict::kept(&pair.id)
}

fn side_majority(
    text: &str,
    declared: &LanguageTag,
    candidates: &[LanguageTag],
    classifier: &dyn WordLanguageClassifier,
) -> Option<f64> {
    let mut known = 0u64;
    let mut matching = 0u64;
    for word in text.split_whitespace() {
        match classifier.classify(word, candidates) {
            Some(tag) => {
                known += 1;
                if &tag == declared {
                    matching += 1;
                }
            }
            None => {} // unknown words stay out of the denominator
        }
    }
    (known > 0).then(|| matching as f64 / known as f64)
}

/// Keep iff on both sides the fraction of classified words matching the
/// declared tag exceeds the majority fraction. A side whose words are all
/// unknown passes.
pub fn language_script_filter(
    pair: &SentencePair,
    classifier: &dyn WordLanguageClassifier,
    policy: &FilterPolicy,
) -> Verdict {
    let candidates = [pair.src_tag.clone(), pair.tgt_tag.clone()];
    for (side, text, declared) in [
        ("source", &pair.src_text, &pair.src_tag),
        ("target", &pair.tgt_text, &pair.tgt_tag),
    ] {
        if let Some(fraction) = side_majority(text, declared, &candidates, classifier) {
            if fraction <= policy.majority_fraction {
                return Verdict::rejected(
                    &pair.id,
                    RejectReason::LanguageScript,
                    format!(
                        "{side} tag majority {fraction:.3} <= {:.3} for {declared}",
                        policy.majority_fraction
                    ),
                );
            }
        }
    }
    Verdict::kept(&pair.id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TagKind {
    Open,
    Close,
    SelfClosing,
}

fn tag_multiset(text: &str) -> BTreeMap<(String, TagKind), u32> {
    static TAG_RE: OnceLock<Regex> = OnceLock::new();
    let re = TAG_RE.get_or_init(|| {
        Regex::new(r"<(/?)([A-Za-z][A-Za-z0-9:._-]*)([^<>]*?)(/?)>").expect("static regex")
    });
    let mut counts = BTreeMap::new();
    for caps in re.captures_iter(text) {
        let kind = if &caps[1] == "/" {
            TagKind::Close
        } else if &caps[4] == "/" {
            TagKind::SelfClosing
        } else {
            TagKind::Open
        };
        *counts.entry((caps[2].to_string(), kind)).or_insert(0) += 1;
    }
    counts
}

/// Keep iff both sides carry the same multiset of markup tags (name and
/// open/close/self-closing kind). Bare `<` comparisons are not tags: a tag
/// needs a letter right after `<` (or after `</`).
pub fn markup_filter(pair: &SentencePair) -> Verdict {
    let src = tag_multiset(&pair.src_text);
    let tgt = tag_multiset(&pair.tgt_text);
    if src == tgt {
        Verdict::kept(&pair.id)
    } else {
        Verdict::rejected(
            &pair.id,
            RejectReason::Markup,
            format!("source has {} tags, target has {}",
                src.values().sum::<u32>(), tgt.values().sum::<u32>()),
        )
    }
}

/// Core QE thresholding over a batch: threshold = mean(present scores) -
/// margin, computed before any rejection; unscored entries are excluded
/// from the mean and rejected with detail "unscored".
pub(crate) fn qe_verdicts(entries: &[(String, Option<f64>)], margin: f64) -> Vec<Verdict> {
    let scored: Vec<f64> = entries.iter().filter_map(|(_, s)| *s).collect();
    let mean = if scored.is_empty() {
        None
    } else {
        Some(scored.iter().sum::<f64>() / scored.len() as f64)
    };
    entries
        .iter()
        .map(|(id, score)| match (score, mean) {
            (None, _) => Verdict::rejected(id.clone(), RejectReason::QeScore, "unscored"),
            (Some(s), Some(m)) => {
                let threshold = m - margin;
                if *s >= threshold {
                    Verdict::kept(id.clone())
                } else {
                    Verdict::rejected(
                        id.clone(),
                        RejectReason::QeScore,
                        format!("score {s} < threshold {threshold} (mean {m} - margin {margin})"),
                    )
                }
            }
            (Some(_), None) => unreachable!("mean exists when any score does"),
        })
        .collect()
}

/// QE filter over a batch of pairs carrying attached scores.
pub fn qe_filter(batch: &[SentencePair], policy: &FilterPolicy) -> Vec<Verdict> {
    let entries: Vec<(String, Option<f64>)> =
        batch.iter().map(|p| (p.id.clone(), p.score)).collect();
    qe_verdicts(&entries, policy.qe_margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Provenance;

    fn pair(id: &str, src: &str, tgt: &str) -> SentencePair {
        SentencePair::new(
            id,
            "WestGermanic+eng_Latn".parse().unwrap(),
            "CentralIndic+hin_Deva".parse().unwrap(),
            src,
            tgt,
            "",
            Provenance::Mined,
            None,
        )
        .unwrap()
    }

    fn words(n: usize, w: &str) -> String {
        vec![w; n].join(" ")
    }

    #[test]
    fn length_filter_word_delta() {
        let policy = FilterPolicy {
            max_char_delta: Some(u64::MAX),
            ..FilterPolicy::default()
        };
        // 12 vs 15 words: delta 3 <= 10.
        let p = pair("1", &words(12, "aa"), &words(15, "ab"));
        assert!(length_filter(&p, &policy).kept);
        // 5 vs 30 words: delta 25 > 10.
        let p = pair("2", &words(5, "aa"), &words(30, "ab"));
        let v = length_filter(&p, &policy);
        assert!(!v.kept);
        assert_eq!(v.reason, Some(RejectReason::Length));
    }

    #[test]
    fn length_filter_equal_texts_always_keep() {
        for policy in [
            FilterPolicy::default(),
            FilterPolicy {
                max_word_delta: 0,
                max_char_delta: Some(0),
                ..FilterPolicy::default()
            },
        ] {
            let p = pair("1", "same text here", "same text here");
            assert!(length_filter(&p, &policy).kept);
        }
    }

    #[test]
    fn length_filter_symmetric() {
        let policy = FilterPolicy::default();
        let a = pair("1", &words(4, "aaaa"), &words(20, "bbbb"));
        let b = pair("1", &words(20, "bbbb"), &words(4, "aaaa"));
        assert_eq!(length_filter(&a, &policy).kept, length_filter(&b, &policy).kept);
    }

    #[test]
    fn length_filter_derived_char_limit() {
        let policy = FilterPolicy::default();
        // 2-word sides, shorter side 9 chars / 2 words -> limit 45 chars.
        let p = pair("1", "word word", &format!("{} {}", "x".repeat(26), "y".repeat(27)));
        // char delta = 54 - 9 = 45 <= 45: kept.
        assert!(length_filter(&p, &policy).kept);
        let p = pair("2", "word word", &format!("{} {}", "x".repeat(27), "y".repeat(27)));
        // char delta = 55 - 9 = 46 > 45: rejected.
        assert!(!length_filter(&p, &policy).kept);
    }

    #[test]
    fn script_filter_pure_sides_keep() {
        let reg = Registry::builtin();
        let classifier = ScriptClassifier::new(reg);
        let policy = FilterPolicy::default();
        let p = pair("1", "the committee met today", "समिति की बैठक आज हुई");
        assert!(language_script_filter(&p, &classifier, &policy).kept);
    }

    #[test]
    fn script_filter_majority_latin_in_hindi_side_rejects() {
        let reg = Registry::builtin();
        let classifier = ScriptClassifier::new(reg);
        let policy = FilterPolicy::default();
        // Target declared hin_Deva but 8 of 10 words Latin-script.
        let tgt = "alpha beta gamma delta epsilon zeta eta theta नमस्ते दुनिया";
        let p = pair("1", "ten latin words here now", tgt);
        let v = language_script_filter(&p, &classifier, &policy);
        assert!(!v.kept);
        assert_eq!(v.reason, Some(RejectReason::LanguageScript));
    }

    #[test]
    fn script_filter_numeric_side_passes() {
        let reg = Registry::builtin();
        let classifier = ScriptClassifier::new(reg);
        let policy = FilterPolicy::default();
        let p = pair("1", "1234 56 789", "३ ४५ ६");
        assert!(language_script_filter(&p, &classifier, &policy).kept);
    }

    #[test]
    fn markup_filter_cases() {
        assert!(markup_filter(&pair("1", "<b>hi</b>", "<b>नमस्ते</b>")).kept);
        let v = markup_filter(&pair("2", "<b>hi</b>", "नमस्ते"));
        assert!(!v.kept);
        assert_eq!(v.reason, Some(RejectReason::Markup));
        assert!(markup_filter(&pair("3", "a < b", "a < b")).kept);
        // Same names but open vs self-closing differs.
        assert!(!markup_filter(&pair("4", "<br>x", "<br/>x")).kept);
        // Attributes do not affect the multiset.
        assert!(markup_filter(&pair("5", "<a href=\"x\">y</a>", "<a>य</a>")).kept);
    }

    #[test]
    fn qe_filter_threshold_from_batch_mean() {
        let mut batch = vec![
            pair("1", "a", "b"),
            pair("2", "c", "d"),
            pair("3", "e", "f"),
        ];
        batch[0].score = Some(80.0);
        batch[1].score = Some(75.0);
        batch[2].score = Some(60.0);
        let verdicts = qe_filter(&batch, &FilterPolicy::default());
        // mean 71.667, threshold 61.667: keeps 80 and 75, rejects 60.
        assert!(verdicts[0].kept);
        assert!(verdicts[1].kept);
        assert!(!verdicts[2].kept);
        assert_eq!(verdicts[2].reason, Some(RejectReason::QeScore));
    }

    #[test]
    fn qe_filter_equal_scores_all_kept() {
        let mut batch = vec![pair("1", "a", "b"), pair("2", "c", "d")];
        for p in &mut batch {
            p.score = Some(50.0);
        }
        assert!(qe_filter(&batch, &FilterPolicy::default()).iter().all(|v| v.kept));
    }

    #[test]
    fn qe_filter_singleton_kept() {
        let mut batch = vec![pair("1", "a", "b")];
        batch[0].score = Some(5.0);
        assert!(qe_filter(&batch, &FilterPolicy::default())[0].kept);
    }

    #[test]
    fn qe_filter_unscored_excluded_from_mean_and_rejected() {
        let mut batch = vec![pair("1", "a", "b"), pair("2", "c", "d")];
        batch[0].score = Some(40.0);
        let verdicts = qe_filter(&batch, &FilterPolicy::default());
        assert!(verdicts[0].kept, "mean is 40, not dragged down by unscored");
        assert!(!verdicts[1].kept);
        assert_eq!(verdicts[1].detail, "unscored");
    }

    #[test]
    fn qe_kept_scores_respect_exact_bound() {
        let scores = [55.0, 61.0, 70.0, 90.0, 44.9, 100.0];
        let batch: Vec<SentencePair> = scores
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut p = pair(&i.to_string(), "a", "b");
                p.score = Some(*s);
                p
            })
            .collect();
        let margin = 10.0;
        let verdicts = qe_filter(&batch, &FilterPolicy { qe_margin: margin, ..Default::default() });
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        for (v, s) in verdicts.iter().zip(&scores) {
            assert_eq!(v.kept, *s >= mean - margin);
        }
    }
}
