//! The multi-task record protocol: one JSON object per line with `task`,
//! `domain`, `input`, and `output` keys. Task strings have the shape
//! `NAME$SRC#TGT`, e.g. `Translation$WestGermanic+eng_Latn#CentralIndic+hin_Deva`.
//! Key order inside `input`/`output` is insertion order and survives
//! serialization.

use std::io::{self, BufRead, Write};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{LineError, LineErrorKind};

/// A task-record output value: text or a score in `[1, 100]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutputValue {
    Text(String),
    Score(f64),
}

impl From<&str> for OutputValue {
    fn from(s: &str) -> Self {
        OutputValue::Text(s.to_string())
    }
}

impl From<String> for OutputValue {
    fn from(s: String) -> Self {
        OutputValue::Text(s)
    }
}

impl From<f64> for OutputValue {
    fn from(v: f64) -> Self {
        OutputValue::Score(v)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordError {
    #[error("task string {0:?} must be NAME$SRC#TGT with one '$' and one '#'")]
    BadTaskString(String),
    #[error("output key {key:?}: score {value} outside [1, 100]")]
    ScoreOutOfRange { key: String, value: f64 },
}

/// One input/output pair in the multi-task protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub task: String,
    pub domain: String,
    pub input: IndexMap<String, String>,
    pub output: IndexMap<String, OutputValue>,
}

impl TaskRecord {
    pub fn new(
        task: impl Into<String>,
        domain: impl Into<String>,
        input: IndexMap<String, String>,
        output: IndexMap<String, OutputValue>,
    ) -> Result<Self, RecordError> {
        let task = task.into();
        Self::split_task(&task)?;
        for (key, value) in &output {
            if let OutputValue::Score(v) = value {
                if !(1.0..=100.0).contains(v) {
                    return Err(RecordError::ScoreOutOfRange {
                        key: key.clone(),
                        value: *v,
                    });
                }
            }
        }
        let domain = domain.into();
        Ok(Self {
            task,
            domain: if domain.is_empty() { "general".into() } else { domain },
            input,
            output,
        })
    }

    /// Compose `NAME$SRC#TGT`.
    pub fn task_string(name: &str, src: &str, tgt: &str) -> String {
        format!("{name}${src}#{tgt}")
    }

    fn split_task(task: &str) -> Result<(&str, &str, &str), RecordError> {
        let bad = || RecordError::BadTaskString(task.to_string());
        let (name, rest) = task.split_once('$').ok_or_else(bad)?;
        let (src, tgt) = rest.split_once('#').ok_or_else(bad)?;
        if name.is_empty()
            || src.is_empty()
            || tgt.is_empty()
            || name.contains(['$', '#'])
            || src.contains('$')
            || tgt.contains(['$', '#'])
        {
            return Err(bad());
        }
        Ok((name, src, tgt))
    }

    /// (task name, source segment, target segment).
    pub fn task_parts(&self) -> (&str, &str, &str) {
        Self::split_task(&self.task).expect("validated at construction")
    }

    /// Re-validate a record that arrived via deserialization.
    pub fn validate(&self) -> Result<(), RecordError> {
        Self::split_task(&self.task)?;
        for (key, value) in &self.output {
            if let OutputValue::Score(v) = value {
                if !(1.0..=100.0).contains(v) {
                    return Err(RecordError::ScoreOutOfRange {
                        key: key.clone(),
                        value: *v,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Write failure carrying how many records were already flushed.
#[derive(Debug, Error)]
#[error("write aborted after {written} records: {source}")]
pub struct WriteError {
    pub written: u64,
    #[source]
    pub source: io::Error,
}

/// Serialize records as compact JSONL; returns the count written.
pub fn write_records<'a, W: Write>(
    records: impl IntoIterator<Item = &'a TaskRecord>,
    mut writer: W,
) -> Result<u64, WriteError> {
    let mut written = 0;
    for record in records {
        let line = serde_json::to_string(record).map_err(|e| WriteError {
            written,
            source: io::Error::other(e),
        })?;
        writer
            .write_all(line.as_bytes())
            .and_then(|()| writer.write_all(b"\n"))
            .map_err(|e| WriteError { written, source: e })?;
        written += 1;
    }
    writer.flush().map_err(|e| WriteError { written, source: e })?;
    Ok(written)
}

/// Lazy JSONL record reader with per-line error recovery.
pub struct RecordReader<R> {
    reader: R,
    line: u64,
    buf: String,
}

pub fn read_records<R: BufRead>(reader: R) -> RecordReader<R> {
    RecordReader {
        reader,
        line: 0,
        buf: String::new(),
    }
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = Result<TaskRecord, LineError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.buf.clear();
        match self.reader.read_line(&mut self.buf) {
            Ok(0) => return None,
            Ok(_) => {}
            Err(e) => {
                return Some(Err(LineError {
                    line: self.line + 1,
                    kind: LineErrorKind::Json(format!("read failed: {e}")),
                }))
            }
        }
        self.line += 1;
        let line = self.line;
        let text = self.buf.trim_end_matches(['\n', '\r']);
        let parsed: Result<TaskRecord, _> = serde_json::from_str(text);
        Some(match parsed {
            Ok(record) => match record.validate() {
                Ok(()) => Ok(record),
                Err(e) => Err(LineError {
                    line,
                    kind: LineErrorKind::Json(e.to_string()),
                }),
            },
            Err(e) => Err(LineError {
                line,
                kind: LineErrorKind::Json(e.to_string()),
            }),
        })
    }
}
