//! Percentage scoring of filtered match sets and top-k selection.

use crate::filter::FilterConfig;
use crate::index::DictionaryStats;
use crate::search::{levenshtein, MatchSet};
use crate::{DocId, Error, Result, TermId};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// `1 - cost / max(|query|, |record|)`, never below 0.
pub fn similarity(query_token: &str, record_token: &str, cost: f64) -> f64 {
    let len = query_token.len().max(record_token.len());
    if len == 0 {
        return 1.0;
    }
    (1.0 - cost / len as f64).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredMatch {
    pub q: String,
    pub d: String,
    pub cost: f64,
    pub sim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredResult {
    pub doc_id: DocId,
    pub name: String,
    pub score: f64,
    pub matches: Vec<ScoredMatch>,
}

/// Scores `match_set` against its document.
///
/// Every distinct record token contributes at most once, through the match
/// with the highest similarity, weighted by the token's information. With
/// `weighted` the similarity comes from the match's weighted cost,
/// otherwise from the plain Levenshtein distance of the two tokens.
pub fn score_document(stats: &DictionaryStats, match_set: &MatchSet, weighted: bool) -> Result<ScoredResult> {
    let doc = stats
        .doc(match_set.doc_id)
        .ok_or(Error::UnknownDoc(match_set.doc_id))?;

    let mut best: Vec<(TermId, ScoredMatch)> = Vec::new();
    for m in &match_set.matches {
        let cost = if weighted {
            m.cost
        } else {
            levenshtein(&m.query_token, &m.record_token) as f64
        };
        let cand = ScoredMatch {
            q: m.query_token.to_string(),
            d: m.record_token.to_string(),
            cost,
            sim: similarity(&m.query_token, &m.record_token, cost),
        };
        match best.iter_mut().find(|(t, _)| *t == m.term) {
            Some((_, cur)) => {
                let better = cand
                    .sim
                    .total_cmp(&cur.sim)
                    .then(cur.cost.total_cmp(&cand.cost))
                    .then(cur.q.cmp(&cand.q))
                    == Ordering::Greater;
                if better {
                    *cur = cand;
                }
            }
            None => best.push((m.term, cand)),
        }
    }

    let mut tmi = 0.0;
    let mut matches = Vec::with_capacity(best.len());
    for term in &doc.terms {
        let Some(pos) = best.iter().position(|(t, _)| *t == term.term) else {
            continue;
        };
        let (_, m) = best.swap_remove(pos);
        tmi += m.sim * stats.term_information(*term);
        matches.push(m);
    }
    if let Some((t, _)) = best.first() {
        return Err(Error::UnknownTerm {
            doc_id: doc.id,
            token: stats.term(*t).text.to_string(),
        });
    }
    let score = (100.0 * (tmi / doc.total_information)).clamp(0.0, 100.0);
    Ok(ScoredResult {
        doc_id: doc.id,
        name: doc.name.clone(),
        score,
        matches,
    })
}

/// Score descending, then doc id ascending.
pub fn result_order(a: &ScoredResult, b: &ScoredResult) -> Ordering {
    b.score.total_cmp(&a.score).then(a.doc_id.cmp(&b.doc_id))
}

/// Results scoring at least `sigma`, best first, at most `k` of them.
pub fn top_k(mut scored: Vec<ScoredResult>, cfg: &FilterConfig) -> Vec<ScoredResult> {
    scored.retain(|r| r.score >= cfg.sigma);
    scored.sort_by(result_order);
    scored.truncate(cfg.k);
    scored
}
