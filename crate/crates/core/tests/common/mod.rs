#![allow(dead_code)]

use sanctrie::search::CostMatrices;
use sanctrie::{Document, ThresholdSchedule};
use std::collections::{BTreeSet, HashMap};

/// Top-down memoized recursion over (record prefix, query prefix).
pub fn oracle_distance(query: &str, record: &str, costs: &CostMatrices) -> f64 {
    let q = query.as_bytes();
    let r = record.as_bytes();
    let mut memo = vec![None; (q.len() + 1) * (r.len() + 1)];
    fn go(q: &[u8], r: &[u8], i: usize, j: usize, c: &CostMatrices, memo: &mut [Option<f64>]) -> f64 {
        let key = i * (q.len() + 1) + j;
        if let Some(v) = memo[key] {
            return v;
        }
        let prev = |s: &[u8], k: usize| (k >= 2).then(|| s[k - 2]);
        let mut best = f64::INFINITY;
        if i == 0 && j == 0 {
            best = 0.0;
        }
        if i > 0 {
            best = best.min(go(q, r, i - 1, j, c, memo) + c.insertion(prev(r, i), r[i - 1]));
        }
        if j > 0 {
            best = best.min(go(q, r, i, j - 1, c, memo) + c.deletion(prev(q, j), q[j - 1]));
        }
        if i > 0 && j > 0 {
            let s = if q[j - 1] == r[i - 1] { 0.0 } else { c.substitution(q[j - 1], r[i - 1]) };
            best = best.min(go(q, r, i - 1, j - 1, c, memo) + s);
        }
        memo[key] = Some(best);
        best
    }
    go(q, r, r.len(), q.len(), costs, &mut memo)
}

/// Full-matrix unit-cost edit distance.
pub fn wagner_fischer(a: &str, b: &str) -> usize {
    let (a, b) = (a.as_bytes(), b.as_bytes());
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..=a.len() {
        d[i][0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

/// Lowercased ASCII alphanumeric runs; enough for the ASCII inputs the
/// oracle is fed.
pub fn ascii_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_ascii_lowercase())
        .collect()
}

/// Base tokens plus every join of 2..=limit neighbours, distinct.
pub fn query_terms(text: &str, limit: usize) -> Vec<String> {
    let base = ascii_tokens(text);
    let mut out: Vec<String> = Vec::new();
    for t in &base {
        if !out.contains(t) {
            out.push(t.clone());
        }
    }
    for w in 2..=limit {
        for s in 0..base.len().saturating_sub(w - 1) {
            let j = base[s..s + w].concat();
            if !out.contains(&j) {
                out.push(j);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleHit {
    pub doc_id: u64,
    pub score: f64,
}

/// Screening by exhaustive comparison of every query term with every
/// record token, support counted by scanning all documents.
pub fn oracle_screen(
    docs: &[Document],
    text: &str,
    costs: &CostMatrices,
    schedule: &ThresholdSchedule,
    k: usize,
    sigma: f64,
) -> Vec<OracleHit> {
    let n = docs.len() as f64;
    let doc_tokens: Vec<Vec<String>> = docs.iter().map(|d| ascii_tokens(&d.raw_name)).collect();
    let mut df: HashMap<&str, usize> = HashMap::new();
    for toks in &doc_tokens {
        let distinct: BTreeSet<&str> = toks.iter().map(String::as_str).collect();
        for t in distinct {
            *df.entry(t).or_default() += 1;
        }
    }
    let terms = query_terms(text, 4);
    let mut hits = Vec::new();
    for (doc, toks) in docs.iter().zip(&doc_tokens) {
        let mut distinct: Vec<&str> = Vec::new();
        for t in toks {
            if !distinct.contains(&t.as_str()) {
                distinct.push(t);
            }
        }
        let mut best: HashMap<&str, f64> = HashMap::new();
        for &d in &distinct {
            for q in &terms {
                let cost = oracle_distance(q, d, costs);
                if cost <= schedule.allowed(q.len().max(d.len())) {
                    let sim = (1.0 - cost / q.len().max(d.len()) as f64).max(0.0);
                    let e = best.entry(d).or_insert(sim);
                    *e = e.max(sim);
                }
            }
        }
        if best.is_empty() {
            continue;
        }
        let matched: Vec<&str> = best.keys().copied().collect();
        if matched.len() == 1 && df[matched[0]] > k {
            continue;
        }
        let support = doc_tokens
            .iter()
            .filter(|other| matched.iter().all(|m| other.iter().any(|o| o == m)))
            .count();
        if support > k {
            continue;
        }
        let info = |t: &str| {
            let tf = toks.iter().filter(|x| *x == t).count() as f64;
            tf * (1.0 + n / df[t] as f64).ln()
        };
        let tid: f64 = distinct.iter().map(|t| info(t)).sum();
        let tmi: f64 = distinct.iter().map(|t| best.get(t).map_or(0.0, |s| s * info(t))).sum();
        let score = 100.0 * tmi / tid;
        if score >= sigma {
            hits.push(OracleHit { doc_id: doc.doc_id, score });
        }
    }
    hits.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.doc_id.cmp(&b.doc_id)));
    hits.truncate(k);
    hits
}

/// Nearest-rank percentile of sorted samples.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}
