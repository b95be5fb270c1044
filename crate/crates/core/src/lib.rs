//! Polyrepresentation of query context with subjective logic.
//!
//! Context representations of a search topic (information need, background,
//! work task, ideal answer) are turned into opinions about the original
//! query, fused pairwise by consensus or recommendation, and scored by the
//! expectation of the fused opinion. The [`eval`] module computes retrieval
//! effectiveness from run and qrels files so those scores can be checked
//! against actual retrieval behaviour.

pub mod eval;
pub mod evidence;
pub mod exec;
pub mod opinion;
pub mod polyrep;
pub mod text;

pub use evidence::{EvidencePair, PositiveRule};
pub use exec::Execution;
pub use opinion::{EvidenceCounts, Opinion, OpinionError};
pub use polyrep::{
    AggregationMode, CombinationResult, CombinationSpec, MatrixConfig, Operator, Order, Representation, Topic,
};
pub use text::{tokenize, PrepLevel, TermSet};
