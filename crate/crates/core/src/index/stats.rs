use super::Document;
use crate::{DocId, Error, Result, TermId};
use std::collections::HashMap;
use std::sync::Arc;

/// A distinct dictionary token and the sorted ids of the documents holding it.
#[derive(Debug, Clone)]
pub struct TermEntry {
    pub text: Arc<str>,
    pub postings: Vec<DocId>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DocTerm {
    pub term: TermId,
    pub tf: u32,
}

#[derive(Debug, Clone)]
pub struct DocEntry {
    pub id: DocId,
    pub name: String,
    /// Distinct tokens in order of first occurrence.
    pub terms: Vec<DocTerm>,
    /// Sum of `tf * idf` over `terms`, in that order.
    pub total_information: f64,
}

impl DocEntry {
    pub fn term_count(&self) -> usize {
        self.terms.iter().map(|t| t.tf as usize).sum()
    }
}

/// Corpus-wide statistics: N, document frequency, term frequency and the
/// posting list of every token.
///
/// IDF is `ln(1 + N / df)`, which stays strictly positive even for a token
/// present in every document.
#[derive(Debug, Clone)]
pub struct DictionaryStats {
    terms: Vec<TermEntry>,
    vocab: HashMap<Arc<str>, TermId>,
    /// Sorted by id.
    docs: Vec<DocEntry>,
}

impl DictionaryStats {
    pub fn from_documents(mut documents: Vec<Document>) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::NoDocuments);
        }
        documents.sort_unstable_by_key(|d| d.doc_id);
        if let Some(w) = documents.windows(2).find(|w| w[0].doc_id == w[1].doc_id) {
            return Err(Error::DuplicateDocId(w[0].doc_id));
        }

        let mut terms: Vec<TermEntry> = Vec::new();
        let mut vocab: HashMap<Arc<str>, TermId> = HashMap::new();
        let mut docs = Vec::with_capacity(documents.len());
        for doc in documents {
            let mut doc_terms: Vec<DocTerm> = Vec::with_capacity(doc.tokens.len());
            for token in doc.tokens.into_vec() {
                let id = match vocab.get(token.as_str()) {
                    Some(&id) => id,
                    None => {
                        let id = TermId(terms.len() as u32);
                        let text: Arc<str> = Arc::from(token);
                        vocab.insert(text.clone(), id);
                        terms.push(TermEntry {
                            text,
                            postings: Vec::new(),
                        });
                        id
                    }
                };
                match doc_terms.iter_mut().find(|t| t.term == id) {
                    Some(t) => t.tf += 1,
                    None => {
                        doc_terms.push(DocTerm { term: id, tf: 1 });
                        // Documents arrive in ascending id order, so postings stay sorted.
                        terms[id.0 as usize].postings.push(doc.doc_id);
                    }
                }
            }
            docs.push(DocEntry {
                id: doc.doc_id,
                name: doc.raw_name,
                terms: doc_terms,
                total_information: 0.0,
            });
        }

        let mut stats = DictionaryStats { terms, vocab, docs };
        let tids: Vec<f64> = stats
            .docs
            .iter()
            .map(|d| d.terms.iter().map(|t| stats.term_information(*t)).sum())
            .collect();
        for (doc, tid) in stats.docs.iter_mut().zip(tids) {
            doc.total_information = tid;
        }
        Ok(stats)
    }

    pub fn n_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn docs(&self) -> &[DocEntry] {
        &self.docs
    }

    pub fn doc(&self, id: DocId) -> Option<&DocEntry> {
        self.docs
            .binary_search_by_key(&id, |d| d.id)
            .ok()
            .map(|i| &self.docs[i])
    }

    pub fn term_id(&self, token: &str) -> Option<TermId> {
        self.vocab.get(token).copied()
    }

    pub fn term(&self, id: TermId) -> &TermEntry {
        &self.terms[id.0 as usize]
    }

    pub fn terms(&self) -> impl Iterator<Item = (TermId, &TermEntry)> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| (TermId(i as u32), t))
    }

    /// Global posting list of `token`; empty when the token is not indexed.
    pub fn postings(&self, token: &str) -> &[DocId] {
        self.term_id(token)
            .map(|id| self.term(id).postings.as_slice())
            .unwrap_or(&[])
    }

    pub fn doc_freq(&self, token: &str) -> usize {
        self.postings(token).len()
    }

    pub fn doc_freq_of(&self, id: TermId) -> usize {
        self.term(id).postings.len()
    }

    pub fn term_freq(&self, doc_id: DocId, token: &str) -> Option<u32> {
        let id = self.term_id(token)?;
        self.doc(doc_id)?
            .terms
            .iter()
            .find(|t| t.term == id)
            .map(|t| t.tf)
    }

    pub fn idf(&self, id: TermId) -> f64 {
        let df = self.doc_freq_of(id) as f64;
        (1.0 + self.n_docs() as f64 / df).ln()
    }

    /// `TF × IDF` for a term of some document.
    pub fn term_information(&self, term: DocTerm) -> f64 {
        term.tf as f64 * self.idf(term.term)
    }

    pub fn information(&self, doc_id: DocId, token: &str) -> Result<f64> {
        let unknown = || Error::UnknownTerm {
            doc_id,
            token: token.to_string(),
        };
        let id = self.term_id(token).ok_or_else(unknown)?;
        let term = self
            .doc(doc_id)
            .and_then(|d| d.terms.iter().find(|t| t.term == id))
            .ok_or_else(unknown)?;
        Ok(self.term_information(*term))
    }
}
