//! Batch checkpointing for resumable backend runs: a JSONL file of
//! completed-batch results keyed by batch index. Resuming replays the file
//! and re-processes only the missing batches, so an interrupted run ends in
//! the same outputs as an uninterrupted one.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointBatch {
    pub batch: usize,
    pub translations: Vec<String>,
    pub scores: Vec<f64>,
}

/// Append-only batch checkpoint file.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    path: PathBuf,
}

impl Checkpoint {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Load completed batches; a missing file is an empty checkpoint.
    pub fn load(&self) -> io::Result<BTreeMap<usize, CheckpointBatch>> {
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
            Err(e) => return Err(e),
        };
        let mut out = BTreeMap::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let batch: CheckpointBatch = serde_json::from_str(&line)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
            out.insert(batch.batch, batch);
        }
        Ok(out)
    }

    pub fn append(&self, batch: &CheckpointBatch) -> io::Result<()> {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let line = serde_json::to_string(batch)?;
        file.write_all(line.as_bytes())?;
        file.write_all(b"\n")?;
        file.flush()
    }
}
