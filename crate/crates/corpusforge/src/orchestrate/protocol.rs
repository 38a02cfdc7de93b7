//! Wire types for HTTP translation/scoring backends.
//!
//! Translator: POST `{"src": "<tag>", "tgt": "<tag>", "texts": [...]}`,
//! response `{"texts": [...]}`. Scorer: POST `{"src": ..., "tgt": ...,
//! "pairs": [["source", "translation"], ...]}`, response
//! `{"scores": [...]}`. Tags are formatted `FAMILY+code_Script` strings.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslateRequest {
    pub src: String,
    pub tgt: String,
    pub texts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslateResponse {
    pub texts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub src: String,
    pub tgt: String,
    pub pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub scores: Vec<f64>,
}
