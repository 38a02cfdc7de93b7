//! Static Unicode block tables for the 15 scripts in the registry, and the
//! dominant-script heuristic used for cleaning and word classification.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// The scripts that appear in the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Script {
    Arab,
    Beng,
    Deva,
    Gujr,
    Guru,
    Knda,
    Latn,
    Mlym,
    Mtei,
    Olck,
    Orya,
    Sinh,
    Taml,
    Telu,
    Wara,
}

impl Script {
    pub const ALL: [Script; 15] = [
        Script::Arab,
        Script::Beng,
        Script::Deva,
        Script::Gujr,
        Script::Guru,
        Script::Knda,
        Script::Latn,
        Script::Mlym,
        Script::Mtei,
        Script::Olck,
        Script::Orya,
        Script::Sinh,
        Script::Taml,
        Script::Telu,
        Script::Wara,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            Script::Arab => "Arab",
            Script::Beng => "Beng",
            Script::Deva => "Deva",
            Script::Gujr => "Gujr",
            Script::Guru => "Guru",
            Script::Knda => "Knda",
            Script::Latn => "Latn",
            Script::Mlym => "Mlym",
            Script::Mtei => "Mtei",
            Script::Olck => "Olck",
            Script::Orya => "Orya",
            Script::Sinh => "Sinh",
            Script::Taml => "Taml",
            Script::Telu => "Telu",
            Script::Wara => "Wara",
        }
    }

    pub fn from_code(code: &str) -> Option<Script> {
        Script::ALL.iter().copied().find(|s| s.code() == code)
    }

    /// Code point ranges (inclusive) dominant for this script.
    pub fn unicode_blocks(&self) -> &'static [(u32, u32)] {
        match self {
            Script::Arab => &[
                (0x0600, 0x06FF),
                (0x0750, 0x077F),
                (0x08A0, 0x08FF),
                (0xFB50, 0xFDFF),
                (0xFE70, 0xFEFF),
            ],
            Script::Beng => &[(0x0980, 0x09FF)],
            // Devanagari plus its Extended block and the Vedic extensions.
            Script::Deva => &[(0x0900, 0x097F), (0x1CD0, 0x1CFF), (0xA8E0, 0xA8FF)],
            Script::Gujr => &[(0x0A80, 0x0AFF)],
            Script::Guru => &[(0x0A00, 0x0A7F)],
            Script::Knda => &[(0x0C80, 0x0CFF)],
            // Basic Latin and Latin-1 letters, plus the extended blocks that
            // romanized Indic text leans on (macrons, retroflex dots).
            Script::Latn => &[
                (0x0041, 0x005A),
                (0x0061, 0x007A),
                (0x00C0, 0x00FF),
                (0x0100, 0x024F),
                (0x1E00, 0x1EFF),
            ],
            Script::Mlym => &[(0x0D00, 0x0D7F)],
            Script::Mtei => &[(0xAAE0, 0xAAFF), (0xABC0, 0xABFF)],
            Script::Olck => &[(0x1C50, 0x1C7F)],
            Script::Orya => &[(0x0B00, 0x0B7F)],
            Script::Sinh => &[(0x0D80, 0x0DFF)],
            Script::Taml => &[(0x0B80, 0x0BFF)],
            Script::Telu => &[(0x0C00, 0x0C7F)],
            Script::Wara => &[(0x118A0, 0x118FF)],
        }
    }

    /// The script owning this code point, if any block covers it.
    pub fn of_char(c: char) -> Option<Script> {
        let table = flat_table();
        let cp = c as u32;
        match table.binary_search_by(|&(lo, _, _)| lo.cmp(&cp)) {
            Ok(i) => Some(table[i].2),
            Err(0) => None,
            Err(i) => {
                let (_, hi, script) = table[i - 1];
                (cp <= hi).then_some(script)
            }
        }
    }
}

fn flat_table() -> &'static [(u32, u32, Script)] {
    static TABLE: OnceLock<Vec<(u32, u32, Script)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v: Vec<(u32, u32, Script)> = Script::ALL
            .iter()
            .flat_map(|s| s.unicode_blocks().iter().map(|&(lo, hi)| (lo, hi, *s)))
            .collect();
        v.sort_unstable_by_key(|&(lo, _, _)| lo);
        v
    })
}

/// Outcome of [`dominant_script`]: the winning script and the share of
/// alphabetic code points its blocks cover, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScriptShare {
    pub script: Script,
    pub confidence: f64,
}

/// Find the script whose blocks cover the largest share of the text's
/// alphabetic code points.
///
/// Returns `None` when the text has no alphabetic code points at all, or
/// when none of them fall in a known block — an indeterminate result, as
/// opposed to a low-confidence one. Ties break toward the script listed
/// first in [`Script::ALL`]. Pure and deterministic.
pub fn dominant_script(text: &str) -> Option<ScriptShare> {
    let mut counts = [0u32; Script::ALL.len()];
    let mut letters = 0u32;
    for c in text.chars() {
        if !c.is_alphabetic() {
            continue;
        }
        letters += 1;
        if let Some(script) = Script::of_char(c) {
            counts[script as usize] += 1;
        }
    }
    if letters == 0 {
        return None;
    }
    let (best_idx, &best) = counts
        .iter()
        .enumerate()
        .max_by_key(|&(i, c)| (c, std::cmp::Reverse(i)))?;
    if best == 0 {
        return None;
    }
    Some(ScriptShare {
        script: Script::ALL[best_idx],
        confidence: f64::from(best) / f64::from(letters),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_devanagari_is_certain() {
        let got = dominant_script("नमस्ते दुनिया").unwrap();
        assert_eq!(got.script, Script::Deva);
        assert_eq!(got.confidence, 1.0);
    }

    /// Oracle: count alphabetic code points per script by brute-force block
    /// lookup, independently of the binary-search table.
    fn oracle_share(text: &str, script: Script) -> f64 {
        let mut hits = 0u32;
        let mut letters = 0u32;
        for c in text.chars() {
            if !c.is_alphabetic() {
                continue;
            }
            letters += 1;
            if script
                .unicode_blocks()
                .iter()
                .any(|&(lo, hi)| (lo..=hi).contains(&(c as u32)))
            {
                hits += 1;
            }
        }
        f64::from(hits) / f64::from(letters)
    }

    #[test]
    fn mixed_text_share_matches_block_oracle() {
        let text = "hello दुनिया";
        let got = dominant_script(text).unwrap();
        assert_eq!(got.script, Script::Deva);
        assert_eq!(got.confidence, oracle_share(text, Script::Deva));
        assert_eq!(got.confidence, 6.0 / 11.0);
    }

    #[test]
    fn no_letters_is_indeterminate() {
        assert_eq!(dominant_script("1234 …!!"), None);
        assert_eq!(dominant_script(""), None);
        assert_eq!(dominant_script("   "), None);
    }

    #[test]
    fn unknown_script_letters_are_indeterminate() {
        // Greek: alphabetic but outside every registry block.
        assert_eq!(dominant_script("αβγ"), None);
    }

    #[test]
    fn romanized_diacritics_count_as_latin() {
        let got = dominant_script("Tēlikapāṭi kāṇṭrāsṭ").unwrap();
        assert_eq!(got.script, Script::Latn);
        assert_eq!(got.confidence, 1.0);
    }

    #[test]
    fn blocks_do_not_overlap() {
        let mut all: Vec<(u32, u32)> = Script::ALL
            .iter()
            .flat_map(|s| s.unicode_blocks().iter().copied())
            .collect();
        all.sort_unstable();
        for w in all.windows(2) {
            assert!(w[0].1 < w[1].0, "overlapping blocks {:?} {:?}", w[0], w[1]);
        }
    }
}
