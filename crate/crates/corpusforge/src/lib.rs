//! corpusforge: a deterministic corpus factory for multilingual machine
//! translation data engineering.
//!
//! The crate covers the data side of building a many-language translation
//! system: cleaning and filtering parallel corpora, injecting controlled
//! errors into text with seeded and budgeted perturbation plans,
//! synthesizing post-editing / grammar-correction / error-span / assessment
//! corpora in a JSON multi-task protocol, orchestrating pivot and iterative
//! back-translation against pluggable backends, and scoring the results with
//! a built-in metric suite (BLEU, chrF3, TER, span-F1, Spearman).
//!
//! Everything is reproducible: fixed seeds and configs give byte-identical
//! outputs at any parallelism degree.

pub mod clean;
pub mod corpus;
pub mod lang;
pub mod metrics;
pub mod orchestrate;
pub mod perturb;
pub mod synth;
pub mod text;
