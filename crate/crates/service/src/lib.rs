//! Command line and HTTP front end for the screening engine.

pub mod bench;
pub mod http;
pub mod options;

pub use options::{load_engine, EngineOptions, IndexSummary};
