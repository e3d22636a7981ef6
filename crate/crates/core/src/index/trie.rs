use super::{DictionaryStats, DocEntry};
use crate::{DocId, TermId};
use std::sync::Arc;

pub(crate) const NO_ENTRY: u32 = u32::MAX;

/// Trie node in a preorder arena. The subtree of node `i` occupies
/// `i..end`, so the first child is `i + 1` and the next sibling is `end`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub(crate) letter: u8,
    pub(crate) depth: u32,
    pub(crate) end: u32,
    /// Length of the longest token ending in this subtree (0 if none).
    pub(crate) max_len: u32,
    pub(crate) entry: u32,
}

/// Payload of an end-of-word node.
#[derive(Debug, Clone)]
pub struct EowEntry {
    pub term: TermId,
    pub token: Arc<str>,
    pub postings: Vec<DocId>,
}

/// Letter trie over the tokens of a set of documents, with posting lists at
/// end-of-word nodes. Immutable once built; children are ordered by letter.
#[derive(Debug, Clone)]
pub struct TrieIndex {
    pub(crate) nodes: Vec<Node>,
    pub(crate) entries: Vec<EowEntry>,
}

impl TrieIndex {
    /// Indexes the tokens of `docs`, which must belong to `stats`. Posting
    /// lists only mention the given documents.
    pub fn for_documents<'a>(
        stats: &DictionaryStats,
        docs: impl IntoIterator<Item = &'a DocEntry>,
    ) -> Self {
        let mut local: Vec<Vec<DocId>> = vec![Vec::new(); stats.n_terms()];
        let mut sorted = true;
        let mut last = None;
        for doc in docs {
            sorted &= last.is_none_or(|l| l < doc.id);
            last = Some(doc.id);
            for t in &doc.terms {
                local[t.term.0 as usize].push(doc.id);
            }
        }
        let mut entries: Vec<EowEntry> = local
            .into_iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, mut postings)| {
                if !sorted {
                    postings.sort_unstable();
                }
                let term = TermId(i as u32);
                EowEntry {
                    term,
                    token: stats.term(term).text.clone(),
                    postings,
                }
            })
            .collect();
        entries.sort_unstable_by(|a, b| a.token.cmp(&b.token));
        Self::from_sorted_entries(entries)
    }

    fn from_sorted_entries(entries: Vec<EowEntry>) -> Self {
        let mut nodes = vec![Node {
            letter: 0,
            depth: 0,
            end: 1,
            max_len: 0,
            entry: NO_ENTRY,
        }];
        let mut parents: Vec<u32> = vec![0];
        // Node ids along the path of the previously inserted token.
        let mut path: Vec<u32> = vec![0];
        let mut prev: &[u8] = &[];
        for (ei, entry) in entries.iter().enumerate() {
            let word = entry.token.as_bytes();
            let common = word
                .iter()
                .zip(prev)
                .take_while(|(a, b)| a == b)
                .count();
            path.truncate(common + 1);
            for (depth, &letter) in word.iter().enumerate().skip(common) {
                let id = nodes.len() as u32;
                parents.push(*path.last().unwrap());
                nodes.push(Node {
                    letter,
                    depth: depth as u32 + 1,
                    end: id + 1,
                    max_len: 0,
                    entry: NO_ENTRY,
                });
                path.push(id);
            }
            let last = *path.last().unwrap() as usize;
            nodes[last].entry = ei as u32;
            nodes[last].max_len = word.len() as u32;
            prev = word;
        }
        for i in (1..nodes.len()).rev() {
            let p = parents[i] as usize;
            nodes[p].end = nodes[p].end.max(nodes[i].end);
            nodes[p].max_len = nodes[p].max_len.max(nodes[i].max_len);
        }
        TrieIndex { nodes, entries }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of end-of-word nodes, i.e. distinct tokens.
    pub fn token_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[EowEntry] {
        &self.entries
    }

    /// Length of the longest indexed token.
    pub fn max_token_len(&self) -> usize {
        self.nodes[0].max_len as usize
    }

    fn child(&self, parent: usize, letter: u8) -> Option<usize> {
        let end = self.nodes[parent].end as usize;
        let mut c = parent + 1;
        while c < end {
            let node = &self.nodes[c];
            if node.letter == letter {
                return Some(c);
            }
            c = node.end as usize;
        }
        None
    }

    pub fn find(&self, token: &str) -> Option<&EowEntry> {
        let mut at = 0;
        for &b in token.as_bytes() {
            at = self.child(at, b)?;
        }
        match self.nodes[at].entry {
            NO_ENTRY => None,
            e => Some(&self.entries[e as usize]),
        }
    }

    /// Postings of the end-of-word node spelled by `token`, or empty.
    pub fn lookup_exact(&self, token: &str) -> &[DocId] {
        self.find(token)
            .map(|e| e.postings.as_slice())
            .unwrap_or(&[])
    }

    /// Letters of the children of the node spelled by `prefix`, in order.
    pub fn children_letters(&self, prefix: &str) -> Vec<char> {
        let mut at = 0;
        for &b in prefix.as_bytes() {
            match self.child(at, b) {
                Some(c) => at = c,
                None => return Vec::new(),
            }
        }
        let mut out = Vec::new();
        let end = self.nodes[at].end as usize;
        let mut c = at + 1;
        while c < end {
            out.push(self.nodes[c].letter as char);
            c = self.nodes[c].end as usize;
        }
        out
    }
}
