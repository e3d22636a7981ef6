//! Approximate entity extraction for watch-list screening.
//!
//! Free text (a payment narrative, a party name field) is normalized into
//! tokens, every token is looked up in a letter trie of dictionary tokens
//! with a weighted edit-distance traversal, noisy candidate sets are
//! filtered out by document frequency and support, and the survivors are
//! scored as a percentage of the record's total TF-IDF information that the
//! query covers.
//!
//! ```
//! use sanctrie::{Document, Engine, EngineConfig};
//!
//! let docs = vec![
//!     Document::new(1, "HUSSEIN OZDEN CAN"),
//!     Document::new(2, "TAMERLAAN TZARNAEV"),
//! ];
//! let engine = Engine::build(docs, 1, EngineConfig::default()).unwrap();
//! let report = engine.screen("invoice sent tamerlaan tzarnaev madrid");
//! assert_eq!(report.results[0].doc_id, 2);
//! assert_eq!(report.results[0].score, 100.0);
//! ```

pub mod error;
pub mod eval;
pub mod filter;
pub mod forest;
pub mod index;
pub mod ingest;
pub mod normalize;
pub mod pipeline;
pub mod rank;
pub mod search;

pub use error::{Error, Result};
pub use filter::FilterConfig;
pub use forest::{Forest, SearchConfig};
pub use index::{build_index, DictionaryStats, Document, TrieIndex};
pub use normalize::{expand_query, normalize_text, ExpandedQuery, TokenList};
pub use ingest::InputFormat;
pub use pipeline::{Engine, EngineConfig, Overrides, ScreenReport};
pub use rank::ScoredResult;
pub use search::{CostMatrices, Match, MatchSet, ThresholdSchedule};

/// Identifier of a watch-list entity, unique within one dictionary.
pub type DocId = u64;

/// Dense index of a distinct dictionary token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub u32);
