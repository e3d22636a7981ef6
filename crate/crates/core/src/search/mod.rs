//! Weighted edit-distance lookup of query tokens in the dictionary trie.
//!
//! One depth-first pass over the trie evaluates the edit-distance DP for
//! every dictionary token sharing a prefix at once: the row for a node is
//! derived from its parent's row, and a subtree is abandoned once no token
//! below it can still be within budget. Two lower bounds are used: the
//! smallest value in the row, which never decreases going down since costs
//! are non-negative, and the length difference between query and token
//! times the cheapest insertion or deletion.

mod costs;
mod schedule;

pub use costs::{CostMatrices, EditOp, ALPHABET};
pub use schedule::ThresholdSchedule;

use crate::index::{EowEntry, TrieIndex};
use crate::index::NO_ENTRY;
use crate::normalize::ExpandedQuery;
use crate::{DocId, TermId};
use std::collections::HashMap;
use std::sync::Arc;

/// A query token paired with a record token within the edit budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Match {
    pub query_token: Arc<str>,
    pub record_token: Arc<str>,
    pub term: TermId,
    pub cost: f64,
}

/// All matches collected for one document, at most one per pair of query
/// token and record token.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchSet {
    pub doc_id: DocId,
    pub matches: Vec<Match>,
}

impl MatchSet {
    pub fn new(doc_id: DocId) -> Self {
        MatchSet {
            doc_id,
            matches: Vec::new(),
        }
    }

    /// Adds `m` unless the same query token already matched the same record
    /// token at a cost no greater.
    pub fn offer(&mut self, m: Match) {
        match self
            .matches
            .iter_mut()
            .find(|x| x.term == m.term && x.query_token == m.query_token)
        {
            Some(existing) if m.cost < existing.cost => *existing = m,
            Some(_) => {}
            None => self.matches.push(m),
        }
    }

    /// Distinct record terms, sorted.
    pub fn terms(&self) -> Vec<TermId> {
        let mut t: Vec<TermId> = self.matches.iter().map(|m| m.term).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }
}

pub type Candidates = HashMap<DocId, MatchSet>;

/// Minimum cost of turning `query` into `record`.
pub fn weighted_edit_distance(query: &str, record: &str, costs: &CostMatrices) -> f64 {
    let q = query.as_bytes();
    let r = record.as_bytes();
    let m = q.len();
    let del = deletion_costs(q, costs);
    let mut above: Vec<f64> = Vec::with_capacity(m + 1);
    above.push(0.0);
    for j in 1..=m {
        above.push(above[j - 1] + del[j - 1]);
    }
    let mut cur = vec![0.0; m + 1];
    for (i, &c) in r.iter().enumerate() {
        let prev = if i == 0 { None } else { Some(r[i - 1]) };
        dp_row(q, c, costs.insertion(prev, c), &del, costs, &above, &mut cur);
        std::mem::swap(&mut above, &mut cur);
    }
    above[m]
}

/// Classic unit-cost Levenshtein distance.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a = a.as_bytes();
    let b = b.as_bytes();
    let mut prev: Vec<usize> = (0..=a.len()).collect();
    let mut cur = vec![0; a.len() + 1];
    for (i, &cb) in b.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &ca) in a.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[a.len()]
}

fn deletion_costs(q: &[u8], costs: &CostMatrices) -> Vec<f64> {
    (0..q.len())
        .map(|j| costs.deletion(j.checked_sub(1).map(|p| q[p]), q[j]))
        .collect()
}

/// Fills `cur` with the DP row for one more record letter `c`. Returns the
/// smallest entry.
#[inline]
fn dp_row(
    q: &[u8],
    c: u8,
    ins: f64,
    del: &[f64],
    costs: &CostMatrices,
    above: &[f64],
    cur: &mut [f64],
) -> f64 {
    cur[0] = above[0] + ins;
    let mut min = cur[0];
    for j in 1..=q.len() {
        let v = (above[j] + ins)
            .min(cur[j - 1] + del[j - 1])
            .min(above[j - 1] + costs.substitution(q[j - 1], c));
        cur[j] = v;
        min = min.min(v);
    }
    min
}

/// Visits every dictionary token `t` with
/// `weighted_edit_distance(query, t) <= schedule.allowed(max(|query|, |t|))`,
/// in trie order, together with that distance.
pub fn traverse<'a>(
    index: &'a TrieIndex,
    query: &str,
    costs: &CostMatrices,
    schedule: &ThresholdSchedule,
    mut on_hit: impl FnMut(&'a EowEntry, f64),
) {
    let nodes = &index.nodes;
    if nodes.len() <= 1 {
        return;
    }
    let q = query.as_bytes();
    let m = q.len();
    let max_depth = index.max_token_len();
    let tau = schedule.table(max_depth.max(m));
    let width = m + 1;
    let del = deletion_costs(q, costs);

    // reach[x]: the allowance of the longest token length L <= x whose
    // length difference alone does not exceed its allowance.
    let (min_ins, min_del) = (costs.min_insertion(), costs.min_deletion());
    let mut reach: Vec<Option<(usize, f64)>> = Vec::with_capacity(max_depth + 1);
    for len in 0..=max_depth {
        let allowed = tau[len.max(m)];
        let gap = if len < m {
            (m - len) as f64 * min_del
        } else {
            (len - m) as f64 * min_ins
        };
        let prev = len.checked_sub(1).and_then(|p| reach[p]);
        reach.push(if gap <= allowed { Some((len, allowed)) } else { prev });
    }

    let mut rows = vec![0.0; (max_depth + 1) * width];
    for j in 1..=m {
        rows[j] = rows[j - 1] + del[j - 1];
    }
    let mut path = vec![0u8; max_depth + 1];

    let mut i = 1;
    while i < nodes.len() {
        let node = nodes[i];
        let depth = node.depth as usize;
        let limit = match reach[node.max_len as usize] {
            Some((len, allowed)) if len >= depth => allowed,
            _ => {
                i = node.end as usize;
                continue;
            }
        };
        path[depth] = node.letter;
        let prev = (depth > 1).then(|| path[depth - 1]);
        let ins = costs.insertion(prev, node.letter);

        let (head, tail) = rows.split_at_mut(depth * width);
        let above = &head[(depth - 1) * width..];
        let cur = &mut tail[..width];
        let row_min = dp_row(q, node.letter, ins, &del, costs, above, cur);

        if node.entry != NO_ENTRY && cur[m] <= tau[depth.max(m)] {
            on_hit(&index.entries[node.entry as usize], cur[m]);
        }
        if row_min > limit {
            i = node.end as usize;
        } else {
            i += 1;
        }
    }
}

/// Adds a match for `query_token` to every document holding a dictionary
/// token within budget.
pub fn search_token(
    index: &TrieIndex,
    query_token: &str,
    costs: &CostMatrices,
    schedule: &ThresholdSchedule,
    accumulator: &mut Candidates,
) {
    let query: Arc<str> = Arc::from(query_token);
    traverse(index, query_token, costs, schedule, |entry, cost| {
        for &doc in &entry.postings {
            accumulator
                .entry(doc)
                .or_insert_with(|| MatchSet::new(doc))
                .offer(Match {
                    query_token: query.clone(),
                    record_token: entry.token.clone(),
                    term: entry.term,
                    cost,
                });
        }
    });
}

/// Runs [`search_token`] for every base and window token of the query.
pub fn search_query(
    index: &TrieIndex,
    expanded: &ExpandedQuery,
    costs: &CostMatrices,
    schedule: &ThresholdSchedule,
) -> Candidates {
    let mut acc = Candidates::new();
    for token in expanded.search_tokens() {
        search_token(index, token, costs, schedule, &mut acc);
    }
    acc
}
