//! Language tags, the bundled language registry, and script detection.
//!
//! A tag is the tuple `FAMILY+code_Script`, e.g. `CentralIndic+hin_Deva`.
//! The registry holds the 38 supported (code, script) rows; tags outside the
//! registry still parse but are flagged unregistered so new languages can
//! flow through the pipelines without a release.

mod registry;
mod script;

pub use registry::{LanguageInfo, ParsedTag, Registry, RegistryError};
pub use script::{dominant_script, Script, ScriptShare};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Language family / group (the paper uses the terms interchangeably).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Magadhi,
    WesternIndic,
    CentralIndic,
    Maharashtri,
    Vedic,
    Dravidian,
    TibetoBurman,
    AustroAsiatic,
    WestGermanic,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Magadhi,
        Family::WesternIndic,
        Family::CentralIndic,
        Family::Maharashtri,
        Family::Vedic,
        Family::Dravidian,
        Family::TibetoBurman,
        Family::AustroAsiatic,
        Family::WestGermanic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Magadhi => "Magadhi",
            Family::WesternIndic => "WesternIndic",
            Family::CentralIndic => "CentralIndic",
            Family::Maharashtri => "Maharashtri",
            Family::Vedic => "Vedic",
            Family::Dravidian => "Dravidian",
            Family::TibetoBurman => "TibetoBurman",
            Family::AustroAsiatic => "AustroAsiatic",
            Family::WestGermanic => "WestGermanic",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| TagParseError::UnknownFamily(s.to_string()))
    }
}

/// Malformed language tag, pointing at the offending segment.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagParseError {
    #[error("missing '+' between family and code in {0:?}")]
    MissingFamilySeparator(String),
    #[error("missing '_' between code and script in {0:?}")]
    MissingScriptSeparator(String),
    #[error("unknown language family {0:?}")]
    UnknownFamily(String),
    #[error("bad language code {0:?} (want 3-5 lowercase letters)")]
    BadCode(String),
    #[error("bad script code {0:?} (want 4 letters, title case)")]
    BadScript(String),
}

/// `family + code _ script` identifying one language/script combination.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageTag {
    family: Family,
    code: String,
    script: String,
}

impl LanguageTag {
    /// Build a tag from parts, validating the code and script shapes.
    pub fn new(family: Family, code: &str, script: &str) -> Result<Self, TagParseError> {
        if !(3..=5).contains(&code.len()) || !code.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(TagParseError::BadCode(code.to_string()));
        }
        let sb = script.as_bytes();
        if sb.len() != 4
            || !sb[0].is_ascii_uppercase()
            || !sb[1..].iter().all(|b| b.is_ascii_lowercase())
        {
            return Err(TagParseError::BadScript(script.to_string()));
        }
        Ok(Self {
            family,
            code: code.to_string(),
            script: script.to_string(),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn script(&self) -> &str {
        &self.script
    }

    /// The `code_Script` suffix, used in record keys and lexicon paths.
    pub fn code_script(&self) -> String {
        format!("{}_{}", self.code, self.script)
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}_{}", self.family, self.code, self.script)
    }
}

impl FromStr for LanguageTag {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, rest) = s
            .split_once('+')
            .ok_or_else(|| TagParseError::MissingFamilySeparator(s.to_string()))?;
        let (code, script) = rest
            .split_once('_')
            .ok_or_else(|| TagParseError::MissingScriptSeparator(rest.to_string()))?;
        let family = family.parse::<Family>()?;
        LanguageTag::new(family, code, script)
    }
}

impl Serialize for LanguageTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LanguageTag {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_paper_tags() {
        let t: LanguageTag = "CentralIndic+hin_Deva".parse().unwrap();
        assert_eq!(t.family(), Family::CentralIndic);
        assert_eq!(t.code(), "hin");
        assert_eq!(t.script(), "Deva");

        let t: LanguageTag = "WestGermanic+eng_Latn".parse().unwrap();
        assert_eq!(
            (t.family(), t.code(), t.script()),
            (Family::WestGermanic, "eng", "Latn")
        );
    }

    #[test]
    fn missing_separators_name_the_segment() {
        let err = "CentralIndic+hinDeva".parse::<LanguageTag>().unwrap_err();
        assert_eq!(
            err,
            TagParseError::MissingScriptSeparator("hinDeva".to_string())
        );
        let err = "CentralIndic hin_Deva".parse::<LanguageTag>().unwrap_err();
        assert!(matches!(err, TagParseError::MissingFamilySeparator(_)));
    }

    #[test]
    fn five_letter_codes_allowed() {
        let t: LanguageTag = "CentralIndic+hingh_Deva".parse().unwrap();
        assert_eq!(t.code(), "hingh");
        assert!("CentralIndic+hi_Deva".parse::<LanguageTag>().is_err());
        assert!("CentralIndic+hinghi_Deva".parse::<LanguageTag>().is_err());
    }

    #[test]
    fn formats_round_trip() {
        let t = LanguageTag::new(Family::Dravidian, "tel", "Telu").unwrap();
        assert_eq!(t.to_string(), "Dravidian+tel_Telu");
        assert_eq!(t.to_string().parse::<LanguageTag>().unwrap(), t);
    }

    proptest! {
        #[test]
        fn roundtrip_any_valid_tag(
            family in prop::sample::select(Family::ALL.to_vec()),
            code in "[a-z]{3,5}",
            script in "[A-Z][a-z]{3}",
        ) {
            let tag = LanguageTag::new(family, &code, &script).unwrap();
            let back: LanguageTag = tag.to_string().parse().unwrap();
            prop_assert_eq!(back, tag);
        }
    }
}
