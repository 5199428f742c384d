//! Generates boolean test oracles from Javadoc API documentation.
//!
//! The pipeline runs ingest → partition → prompt → generate → extract →
//! validate → eval. Each stage is a module here; the `oracle-forge` binary
//! exposes them as subcommands.

pub mod clock;
pub mod doc_model;
pub mod gateway;
pub mod partition;
pub mod prompt;
pub mod extract;
mod java_text;
pub mod eval;
pub mod validate;
pub mod conformance;
pub mod artifact;
pub mod config;
pub mod pipeline;
