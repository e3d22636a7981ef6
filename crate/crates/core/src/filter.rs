//! Set-level noise removal between search and ranking.

use crate::index::DictionaryStats;
use crate::search::{Candidates, MatchSet};
use crate::{DocId, Error, Result, TermId};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Result slot count `k` and minimum percentage score `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    pub k: usize,
    pub sigma: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { k: 20, sigma: 60.0 }
    }
}

impl FilterConfig {
    pub fn new(k: usize, sigma: f64) -> Result<Self> {
        let cfg = FilterConfig { k, sigma };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if !(0.0..=100.0).contains(&self.sigma) {
            return Err(Error::Config(format!("sigma {} outside [0, 100]", self.sigma)));
        }
        Ok(())
    }
}

/// Number of documents holding every record token of `terms`.
pub fn support_of(stats: &DictionaryStats, terms: &[TermId]) -> usize {
    let mut lists: Vec<&[DocId]> = terms.iter().map(|&t| stats.term(t).postings.as_slice()).collect();
    lists.sort_by_key(|l| l.len());
    let Some((first, rest)) = lists.split_first() else {
        return 0;
    };
    let mut acc: Vec<DocId> = first.to_vec();
    for list in rest {
        acc = intersect(&acc, list);
        if acc.is_empty() {
            break;
        }
    }
    acc.len()
}

fn intersect(a: &[DocId], b: &[DocId]) -> Vec<DocId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Support of the distinct record tokens of `match_set`.
pub fn support(stats: &DictionaryStats, match_set: &MatchSet) -> usize {
    support_of(stats, &match_set.terms())
}

/// Drops match sets that are a single token with document frequency above
/// `k`, and match sets whose support exceeds `k`. Everything else is kept
/// unchanged.
pub fn filter_matches(candidates: Candidates, stats: &DictionaryStats, cfg: &FilterConfig) -> Candidates {
    let mut memo: HashMap<Vec<TermId>, usize> = HashMap::new();
    candidates
        .into_iter()
        .filter(|(_, set)| {
            let terms = set.terms();
            if let [only] = terms[..] {
                if stats.doc_freq_of(only) > cfg.k {
                    return false;
                }
            }
            let support = *memo
                .entry(terms)
                .or_insert_with_key(|t| support_of(stats, t));
            support <= cfg.k
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{build_index, Document};
    use crate::normalize::{expand_query, normalize_text};
    use crate::search::{search_query, CostMatrices, ThresholdSchedule};

    fn stats(names: &[&str]) -> DictionaryStats {
        let docs = names
            .iter()
            .enumerate()
            .map(|(i, n)| Document::new(i as DocId + 1, *n))
            .collect();
        build_index(docs).unwrap().1
    }

    fn ids(stats: &DictionaryStats, tokens: &[&str]) -> Vec<TermId> {
        tokens.iter().map(|t| stats.term_id(t).unwrap()).collect()
    }

    fn table_one() -> DictionaryStats {
        stats(&[
            "CANBERK BERKIN OZDEMIR",
            "AHMET EMRE BUDUR",
            "OYA CIMEN BUDUR",
            "EMRAH BUDUR",
            "HUSSAIN BERK BUDAK",
            "HUSSEIN OZDEN CAN",
        ])
    }

    fn brute_support(stats: &DictionaryStats, tokens: &[&str]) -> usize {
        stats
            .docs()
            .iter()
            .filter(|d| tokens.iter().all(|t| stats.term_freq(d.id, t).is_some()))
            .count()
    }

    #[test]
    fn support_on_sample() {
        let s = table_one();
        assert_eq!(support_of(&s, &ids(&s, &["budur"])), 3);
        assert_eq!(support_of(&s, &ids(&s, &["budur", "ozdemir"])), 0);
        assert_eq!(support_of(&s, &ids(&s, &["hussain", "berk", "budak"])), 1);
        for combo in [&["budur"][..], &["emre", "budur"], &["ahmet", "emre", "budur"]] {
            assert_eq!(support_of(&s, &ids(&s, combo)), brute_support(&s, combo));
        }
    }

    #[test]
    fn config_bounds() {
        assert!(FilterConfig::new(0, 50.0).is_err());
        assert!(FilterConfig::new(1, -1.0).is_err());
        assert!(FilterConfig::new(1, 100.5).is_err());
        assert!(FilterConfig::new(1, 100.0).is_ok());
        assert_eq!(FilterConfig::default(), FilterConfig { k: 20, sigma: 60.0 });
    }

    fn run(s_names: &[&str], query: &str, k: usize) -> Vec<DocId> {
        let docs = s_names
            .iter()
            .enumerate()
            .map(|(i, n)| Document::new(i as DocId + 1, *n))
            .collect();
        let (index, stats) = build_index(docs).unwrap();
        let q = expand_query(normalize_text(query), 4);
        let cand = search_query(&index, &q, &CostMatrices::uniform(), &ThresholdSchedule::default());
        let cfg = FilterConfig { k, sigma: 0.0 };
        let mut out: Vec<DocId> = filter_matches(cand, &stats, &cfg).into_keys().collect();
        out.sort();
        out
    }

    #[test]
    fn frequent_single_token_dropped() {
        let mut names: Vec<String> = (0..4).map(|i| format!("CORPORATION NAME{}", "X".repeat(i + 1))).collect();
        names.push("ALPHA BETA".into());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        // DocFreq(corporation) = 4 > k = 3.
        assert!(run(&refs, "corporation", 3).is_empty());
        // At k = 4 the boundary is kept.
        assert_eq!(run(&refs, "corporation", 4), [1, 2, 3, 4]);
    }

    #[test]
    fn frequent_itemset_dropped_unique_record_kept() {
        let mut names = vec!["GLOBAL CORPORATION SECURITIES"];
        names.extend(["GLOBAL CORPORATION"; 3]);
        assert_eq!(run(&names, "global corporation", 3), Vec::<DocId>::new());
        // The unique record also matches "securities", so its support is 1.
        assert_eq!(run(&names, "global corporation securities", 3), [1]);
    }

    #[test]
    fn monotone_in_k() {
        let names = ["A1 B1", "A1 B2", "A1 B1 C1", "B1 C1", "A1"];
        let mut prev = Vec::new();
        for k in 1..=6 {
            let got = run(&names, "a1 b1 c1", k);
            assert!(prev.iter().all(|d| got.contains(d)), "k={k}");
            prev = got;
        }
        assert_eq!(prev, [1, 2, 3, 4, 5]);
    }
}
