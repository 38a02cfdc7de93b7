//! Streaming pair readers and writers.
//!
//! TSV: UTF-8, tab-separated, LF line endings, no header; columns are
//! src, tgt, optional score, then opaque extra columns. JSONL: one
//! serialized [`SentencePair`] per line. Malformed lines surface as
//! per-line errors and never abort the stream.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{PairError, Provenance, SentencePair};
use crate::lang::LanguageTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFormat {
    Tsv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LineErrorKind {
    #[error("invalid UTF-8 at byte offset {byte_offset}")]
    Utf8 { byte_offset: u64 },
    #[error("want at least 2 tab-separated columns, got {got}")]
    Columns { got: usize },
    #[error("bad score column: {0}")]
    Score(String),
    #[error("bad JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Pair(PairError),
}

/// A recoverable per-line failure; the reader continues past it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct LineError {
    pub line: u64,
    pub kind: LineErrorKind,
}

/// Defaults applied to pairs read from tag-less formats (TSV).
#[derive(Debug, Clone)]
pub struct ReaderOptions {
    pub src_tag: LanguageTag,
    pub tgt_tag: LanguageTag,
    pub domain: String,
    pub provenance: Provenance,
}

impl ReaderOptions {
    pub fn new(src_tag: LanguageTag, tgt_tag: LanguageTag) -> Self {
        Self {
            src_tag,
            tgt_tag,
            domain: "general".to_string(),
            provenance: Provenance::Mined,
        }
    }

    pub fn domain(mut self, domain: impl Into<String>) -> Self {
        self.domain = domain.into();
        self
    }

    pub fn provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

/// Lazy pair reader; one line is held in memory at a time.
pub struct PairReader<R> {
    reader: R,
    format: PairFormat,
    options: ReaderOptions,
    line: u64,
    byte_offset: u64,
    buf: Vec<u8>,
    done: bool,
}

/// Read pairs from a byte stream in file order with sequential line ids.
pub fn read_pairs<R: BufRead>(reader: R, format: PairFormat, options: ReaderOptions) -> PairReader<R> {
    PairReader {
        reader,
        format,
        options,
        line: 0,
        byte_offset: 0,
        buf: Vec::new(),
        done: false,
    }
}

impl<R: BufRead> PairReader<R> {
    fn parse_line(&self, text: &str) -> Result<SentencePair, LineErrorKind> {
        match self.format {
            PairFormat::Tsv => {
                let cols: Vec<&str> = text.split('\t').collect();
                if cols.len() < 2 {
                    return Err(LineErrorKind::Columns { got: cols.len() });
                }
                let score = match cols.get(2) {
                    None | Some(&"") => None,
                    Some(raw) => Some(
                        raw.parse::<f64>()
                            .map_err(|e| LineErrorKind::Score(format!("{raw:?}: {e}")))?,
                    ),
                };
                let mut pair = SentencePair::new(
                    self.line.to_string(),
                    self.options.src_tag.clone(),
                    self.options.tgt_tag.clone(),
                    cols[0],
                    cols[1],
                    self.options.domain.clone(),
                    self.options.provenance,
                    score,
                )
                .map_err(LineErrorKind::Pair)?;
                pair.extra = cols
                    .get(3..)
                    .unwrap_or(&[])
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                Ok(pair)
            }
            PairFormat::Jsonl => {
                let raw: SentencePair =
                    serde_json::from_str(text).map_err(|e| LineErrorKind::Json(e.to_string()))?;
                // Re-validate and re-normalize via the constructor.
                let mut pair = SentencePair::new(
                    raw.id,
                    raw.src_tag,
                    raw.tgt_tag,
                    &raw.src_text,
                    &raw.tgt_text,
                    raw.domain,
                    raw.provenance,
                    raw.score,
                )
                .map_err(LineErrorKind::Pair)?;
                pair.extra = raw.extra;
                Ok(pair)
            }
        }
    }
}

impl<R: BufRead> Iterator for PairReader<R> {
    type Item = Result<SentencePair, LineError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        self.buf.clear();
        let line_start = self.byte_offset;
        match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => {
                self.done = true;
                return None;
            }
            Ok(n) => self.byte_offset += n as u64,
            Err(e) => {
                self.done = true;
                return Some(Err(LineError {
                    line: self.line + 1,
                    kind: LineErrorKind::Json(format!("read failed: {e}")),
                }));
            }
        }
        self.line += 1;
        let raw = &self.buf[..];
        let raw = raw.strip_suffix(b"\n").unwrap_or(raw);
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);

        let text = match std::str::from_utf8(raw) {
            Ok(t) => t,
            Err(e) => {
                return Some(Err(LineError {
                    line: self.line,
                    kind: LineErrorKind::Utf8 {
                        byte_offset: line_start + e.valid_up_to() as u64,
                    },
                }))
            }
        };
        Some(self.parse_line(text).map_err(|kind| LineError { line: self.line, kind }))
    }
}

/// Write pairs as JSONL. Returns the count written; an I/O failure reports
/// how many records were already flushed.
pub fn write_pairs<'a, W: Write>(
    pairs: impl IntoIterator<Item = &'a SentencePair>,
    mut writer: W,
) -> Result<u64, super::WriteError> {
    let mut written = 0;
    for pair in pairs {
        let line = serde_json::to_string(pair).map_err(|e| super::WriteError {
            written,
            source: io::Error::other(e),
        })?;
        writer
            .write_all(line.as_bytes())
            .and_then(|()| writer.write_all(b"\n"))
            .map_err(|e| super::WriteError { written, source: e })?;
        written += 1;
    }
    writer.flush().map_err(|e| super::WriteError { written, source: e })?;
    Ok(written)
}
