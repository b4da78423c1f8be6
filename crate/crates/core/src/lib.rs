//! Semantic-preserving rewrites of Java and Python code plus the metrics and
//! reports used to measure how code models react to them.
//!
//! The usual flow is [`corpus::load_corpus`] -> [`pipeline::run_batch`] (or
//! [`transform::apply`] for one snippet) -> model predictions scored with
//! [`metrics`] -> [`report::build_report`].

pub mod corpus;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod syntax;
pub mod transform;

pub use error::{Error, Result};
