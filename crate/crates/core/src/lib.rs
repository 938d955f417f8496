//! Supervised word-sense disambiguation toolkit.
//!
//! The crate is organized around a small data model (lexicon, corpus,
//! embeddings), a feature layer that turns annotated tokens into sparse/dense
//! vectors, per-word-type linear SVMs, and a pipeline that trains layered
//! models, augments training data, and disambiguates corpora. The
//! `evaluation` module scores answers and builds ablation tables.

pub mod classifier;
pub mod corpus;
pub mod digest;
pub mod embeddings;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod lexicon;
pub mod pipeline;

pub use error::{Error, Result};
