//! Quantifying fine-grained morphosyntactic translation divergence between
//! parallel corpora.
//!
//! The pipeline ingests dependency-parsed parallel corpora (CoNLL-U) with
//! word alignments (Pharaoh format), extracts word-based and arc-based
//! translation patterns for every content word, and computes distributional
//! statistics over them: diversity (conditional entropy), convergence rates,
//! unit-cost Wasserstein distances, frequency-binned trends, and
//! quality-delta analyses over divergence-defined sentence groups. A
//! seedable synthetic-corpus generator and a decoder simulator support
//! controlled experiments and oracle-checked tests.

pub mod align;
pub mod error;
pub mod patterns;
pub mod quality;
pub mod stats;
pub mod treebank;

pub use error::{Error, Result};
