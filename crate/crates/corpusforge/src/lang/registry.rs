//! The bundled 38-entry language registry and its on-disk table format.
//!
//! Format: `# corpusforge-registry v1` header, then one row per entry,
//! tab-separated: id, family, code, script, display name. `#` lines are
//! comments. The table bundled at build time can be overridden from a file
//! at run time (`--registry` on the CLI).

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use super::script::Script;
use super::{LanguageTag, TagParseError};

const BUILTIN_TABLE: &str = include_str!("../../assets/registry.tsv");
const FORMAT_HEADER: &str = "# corpusforge-registry v1";

/// One registry row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageInfo {
    pub id: u32,
    pub tag: LanguageTag,
    pub display_name: String,
}

impl LanguageInfo {
    /// Group label; in this registry the group is the family.
    pub fn group(&self) -> &'static str {
        self.tag.family().name()
    }

    /// Dominant code point ranges for the entry's script.
    pub fn unicode_blocks(&self) -> &'static [(u32, u32)] {
        Script::from_code(self.tag.script())
            .map(|s| s.unicode_blocks())
            .unwrap_or(&[])
    }
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("registry header missing or unsupported (want {FORMAT_HEADER:?})")]
    BadHeader,
    #[error("registry line {line}: {msg}")]
    BadRow { line: usize, msg: String },
    #[error("registry line {line}: duplicate (code, script) pair {pair}")]
    DuplicatePair { line: usize, pair: String },
    #[error("registry line {line}: {source}")]
    BadTag {
        line: usize,
        source: TagParseError,
    },
}

/// Result of parsing a tag against a registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTag {
    pub tag: LanguageTag,
    /// True when (code, script) is a registry row with the same family.
    pub registered: bool,
}

/// Lookup table over [`LanguageInfo`] entries, keyed by (code, script).
#[derive(Debug, Clone)]
pub struct Registry {
    entries: Vec<LanguageInfo>,
    by_pair: HashMap<(String, String), usize>,
}

impl Registry {
    /// The registry bundled with the artifact.
    pub fn builtin() -> &'static Registry {
        static BUILTIN: OnceLock<Registry> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            Registry::parse_table(BUILTIN_TABLE).expect("bundled registry table is valid")
        })
    }

    pub fn parse_table(table: &str) -> Result<Registry, RegistryError> {
        let mut lines = table.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == FORMAT_HEADER => {}
            _ => return Err(RegistryError::BadHeader),
        }

        let mut entries = Vec::new();
        let mut by_pair = HashMap::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 5 {
                return Err(RegistryError::BadRow {
                    line: line_no,
                    msg: format!("want 5 tab-separated columns, got {}", cols.len()),
                });
            }
            let id: u32 = cols[0].parse().map_err(|_| RegistryError::BadRow {
                line: line_no,
                msg: format!("bad id {:?}", cols[0]),
            })?;
            let family = super::Family::from_str(cols[1])
                .map_err(|source| RegistryError::BadTag { line: line_no, source })?;
            let tag = LanguageTag::new(family, cols[2], cols[3])
                .map_err(|source| RegistryError::BadTag { line: line_no, source })?;
            let key = (tag.code().to_string(), tag.script().to_string());
            if by_pair.contains_key(&key) {
                return Err(RegistryError::DuplicatePair {
                    line: line_no,
                    pair: tag.code_script(),
                });
            }
            by_pair.insert(key, entries.len());
            entries.push(LanguageInfo {
                id,
                tag,
                display_name: cols[4].to_string(),
            });
        }
        Ok(Registry { entries, by_pair })
    }

    /// Serialize back to the versioned table format.
    pub fn to_table_string(&self) -> String {
        let mut out = String::from(FORMAT_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                e.id,
                e.tag.family(),
                e.tag.code(),
                e.tag.script(),
                e.display_name
            ));
        }
        out
    }

    pub fn entries(&self) -> &[LanguageInfo] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, code: &str, script: &str) -> Option<&LanguageInfo> {
        self.by_pair
            .get(&(code.to_string(), script.to_string()))
            .map(|&i| &self.entries[i])
    }

    pub fn info(&self, tag: &LanguageTag) -> Option<&LanguageInfo> {
        self.get(tag.code(), tag.script())
    }

    /// Registered means the (code, script) row exists and its family agrees.
    pub fn is_registered(&self, tag: &LanguageTag) -> bool {
        self.info(tag).is_some_and(|e| e.tag.family() == tag.family())
    }

    /// Parse a tag string, flagging whether it names a registry entry.
    /// Unregistered tags are not an error.
    pub fn parse_tag(&self, s: &str) -> Result<ParsedTag, TagParseError> {
        let tag: LanguageTag = s.parse()?;
        let registered = self.is_registered(&tag);
        Ok(ParsedTag { tag, registered })
    }

    /// Entries whose script matches, in id order.
    pub fn entries_with_script<'a>(
        &'a self,
        script: &'a str,
    ) -> impl Iterator<Item = &'a LanguageInfo> + 'a {
        self.entries.iter().filter(move |e| e.tag.script() == script)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::Family;

    #[test]
    fn builtin_has_38_rows_with_unique_pairs_and_ids() {
        let reg = Registry::builtin();
        assert_eq!(reg.len(), 38);
        let mut ids: Vec<u32> = reg.entries().iter().map(|e| e.id).collect();
        ids.sort_unstable();
        assert_eq!(ids, (1..=38).collect::<Vec<_>>());
    }

    #[test]
    fn dual_script_languages_present() {
        let reg = Registry::builtin();
        for (code, scripts) in [
            ("kas", ["Arab", "Deva"]),
            ("snd", ["Arab", "Deva"]),
            ("mni", ["Beng", "Mtei"]),
        ] {
            for script in scripts {
                assert!(reg.get(code, script).is_some(), "{code}_{script} missing");
            }
        }
    }

    #[test]
    fn parse_format_round_trips_every_entry() {
        let reg = Registry::builtin();
        for e in reg.entries() {
            let s = e.tag.to_string();
            let parsed = reg.parse_tag(&s).unwrap();
            assert_eq!(parsed.tag, e.tag);
            assert!(parsed.registered, "{s} should be registered");
            assert_eq!(parsed.tag.to_string(), s);
        }
    }

    #[test]
    fn unknown_pair_parses_unregistered() {
        let reg = Registry::builtin();
        let parsed = reg.parse_tag("Dravidian+xyz_Taml").unwrap();
        assert!(!parsed.registered);
        assert_eq!(parsed.tag.code(), "xyz");
    }

    #[test]
    fn family_mismatch_is_unregistered() {
        let reg = Registry::builtin();
        let parsed = reg.parse_tag("Dravidian+hin_Deva").unwrap();
        assert!(!parsed.registered);
    }

    #[test]
    fn every_entry_has_unicode_blocks() {
        for e in Registry::builtin().entries() {
            assert!(
                !e.unicode_blocks().is_empty(),
                "{} has no blocks",
                e.tag.code_script()
            );
        }
    }

    #[test]
    fn hindi_row_matches_table() {
        let e = Registry::builtin().get("hin", "Deva").unwrap();
        assert_eq!(e.id, 12);
        assert_eq!(e.tag.family(), Family::CentralIndic);
        assert_eq!(e.display_name, "Hindi");
        assert_eq!(e.group(), "CentralIndic");
    }

    #[test]
    fn table_serialization_round_trips() {
        let reg = Registry::builtin();
        let text = reg.to_table_string();
        let back = Registry::parse_table(&text).unwrap();
        assert_eq!(back.entries(), reg.entries());
        assert_eq!(back.to_table_string(), text);
    }

    #[test]
    fn rejects_duplicate_pair() {
        let table = "# corpusforge-registry v1\n\
                     1\tCentralIndic\thin\tDeva\tHindi\n\
                     2\tCentralIndic\thin\tDeva\tHindi again\n";
        assert!(matches!(
            Registry::parse_table(table),
            Err(RegistryError::DuplicatePair { .. })
        ));
    }

    #[test]
    fn rejects_missing_header() {
        assert!(matches!(
            Registry::parse_table("1\tCentralIndic\thin\tDeva\tHindi\n"),
            Err(RegistryError::BadHeader)
        ));
    }
}
