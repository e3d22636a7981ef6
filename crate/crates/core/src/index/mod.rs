//! The in-memory dictionary: documents, corpus statistics and the token trie.

mod stats;
mod trie;

pub use stats::{DictionaryStats, DocEntry, DocTerm, TermEntry};
pub(crate) use trie::NO_ENTRY;
pub use trie::{EowEntry, TrieIndex};

use crate::normalize::{normalize_text, TokenList};
use crate::{DocId, Result};
use serde::{Deserialize, Serialize};

/// One watch-list entity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: DocId,
    pub raw_name: String,
    pub tokens: TokenList,
}

impl Document {
    pub fn new(doc_id: DocId, raw_name: impl Into<String>) -> Self {
        let raw_name = raw_name.into();
        let tokens = normalize_text(&raw_name);
        Document {
            doc_id,
            raw_name,
            tokens,
        }
    }
}

/// Builds statistics over `documents` and a single trie holding all of them.
pub fn build_index(documents: Vec<Document>) -> Result<(TrieIndex, DictionaryStats)> {
    let stats = DictionaryStats::from_documents(documents)?;
    let index = TrieIndex::for_documents(&stats, stats.docs());
    Ok((index, stats))
}
