use super::LabeledQuery;
use crate::index::Document;
use crate::normalize::normalize_text;
use crate::search::{levenshtein, ThresholdSchedule};
use crate::DocId;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashSet};

const ONSETS: &[&str] = &[
    "b", "c", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "sh", "ch",
    "kh", "y",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ou"];
const CODAS: &[&str] = &["", "", "n", "r", "l", "s", "m"];

const SUFFIXES: &[&str] = &[
    "LIMITED", "LTD", "CORPORATION", "BANK", "INTERNATIONAL", "CO", "INC", "HOLDINGS", "GROUP",
    "TRADING", "GLOBAL", "SECURITIES",
];

const FILLER: &[&str] = &[
    "INVOICE", "PAYMENT", "TRANSFER", "REF", "SENT", "FOR", "GOODS", "SERVICES", "CONTRACT",
    "PLAZA", "STREET", "MADRID", "LONDON", "RECEIPT", "ORDER", "SALARY", "RENT", "FEE",
];

/// How query tokens are corrupted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypoMode {
    /// Each corrupted token stays within the threshold schedule.
    WithinBudget,
    /// Every record token is pushed past the schedule, so the record cannot
    /// be found.
    BeyondBudget,
}

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub n_docs: usize,
    pub n_queries: usize,
    /// Extra queries built from filler words only, labeled true negative.
    pub n_negatives: usize,
    /// Probability that an eligible query token gets typos.
    pub typo_rate: f64,
    pub mode: TypoMode,
    /// Filler words placed around the embedded name.
    pub distractors: usize,
    /// Pad every query with filler up to this many tokens.
    pub query_tokens: Option<usize>,
    pub schedule: ThresholdSchedule,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_docs: 1000,
            n_queries: 100,
            n_negatives: 0,
            typo_rate: 0.3,
            mode: TypoMode::WithinBudget,
            distractors: 2,
            query_tokens: None,
            schedule: ThresholdSchedule::default(),
            seed: 7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub documents: Vec<Document>,
    pub queries: Vec<LabeledQuery>,
}

fn syllable(rng: &mut impl Rng) -> String {
    let mut s = String::new();
    s.push_str(ONSETS.choose(rng).unwrap());
    s.push_str(VOWELS.choose(rng).unwrap());
    s.push_str(CODAS.choose(rng).unwrap());
    s
}

fn word(rng: &mut impl Rng, syllables: usize) -> String {
    (0..syllables).map(|_| syllable(rng)).collect::<String>().to_uppercase()
}

/// `n` distinct name-like records with ids `1..=n`. Person names draw a
/// first name from a shared pool and get a rare surname; company names get
/// a rare word, sometimes a shared word, and a common suffix. Every name has
/// at least two distinct tokens.
pub fn synth_names(n: usize, seed: u64) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let firsts: Vec<String> = (0..3000).map(|_| word(&mut rng, 2)).collect();
    let shared: Vec<String> = (0..500).map(|_| word(&mut rng, 2)).collect();
    let mut seen = HashSet::with_capacity(n);
    let mut docs = Vec::with_capacity(n);
    while docs.len() < n {
        let syllables = rng.gen_range(2..=3);
        let rare = word(&mut rng, syllables);
        let mut parts: Vec<&str> = Vec::with_capacity(4);
        if rng.gen_bool(0.7) {
            parts.push(firsts.choose(&mut rng).unwrap());
            if rng.gen_bool(0.3) {
                parts.push(firsts.choose(&mut rng).unwrap());
            }
            parts.push(&rare);
        } else {
            parts.push(&rare);
            if rng.gen_bool(0.4) {
                parts.push(shared.choose(&mut rng).unwrap());
            }
            parts.push(SUFFIXES.choose(&mut rng).unwrap());
        }
        let name = parts.join(" ");
        let distinct: HashSet<&&str> = parts.iter().collect();
        if distinct.len() >= 2 && seen.insert(name.clone()) {
            docs.push(Document::new(docs.len() as DocId + 1, name));
        }
    }
    docs
}

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

fn random_edit(token: &mut Vec<u8>, rng: &mut impl Rng) {
    let letter = LETTERS[rng.gen_range(0..LETTERS.len())];
    match rng.gen_range(0..3) {
        0 if token.len() > 1 => {
            token.remove(rng.gen_range(0..token.len()));
        }
        1 => token.insert(rng.gen_range(0..=token.len()), letter),
        _ => {
            let i = rng.gen_range(0..token.len());
            token[i] = letter;
        }
    }
}

/// At most `tau(len)` random edits, so the result stays within budget.
fn within_budget(token: &str, schedule: &ThresholdSchedule, rng: &mut impl Rng) -> String {
    let budget = schedule.allowed(token.len()).floor() as usize;
    if budget == 0 {
        return token.to_string();
    }
    let mut t = token.as_bytes().to_vec();
    for _ in 0..rng.gen_range(1..=budget) {
        random_edit(&mut t, rng);
    }
    String::from_utf8(t).unwrap()
}

/// Edits until the token is farther than any budget could allow from every
/// token in `avoid`.
fn beyond_budget(token: &str, avoid: &[String], schedule: &ThresholdSchedule, rng: &mut impl Rng) -> String {
    let mut t = token.as_bytes().to_vec();
    loop {
        random_edit(&mut t, rng);
        let s = std::str::from_utf8(&t).unwrap();
        if avoid.iter().all(|a| levenshtein(s, a) as f64 > schedule.allowed(s.len().max(a.len()))) {
            return s.to_string();
        }
    }
}

/// Every query token and concatenation of neighbouring tokens, which are
/// what the search looks up.
fn all_windows(tokens: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..tokens.len() {
        for j in i + 1..=tokens.len() {
            out.push(tokens[i..j].concat());
        }
    }
    out
}

/// Deterministic records plus labeled queries embedding them.
pub fn synth_corpus(cfg: &SynthConfig) -> SynthCorpus {
    let documents = synth_names(cfg.n_docs, cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let filler = |rng: &mut ChaCha8Rng| FILLER.choose(rng).unwrap().to_string();
    let mut queries = Vec::with_capacity(cfg.n_queries + cfg.n_negatives);
    for _ in 0..cfg.n_queries {
        let doc = documents.choose(&mut rng).unwrap();
        let record: Vec<String> = doc.tokens.iter().cloned().collect();
        let name: Vec<String> = record
            .iter()
            .map(|t| match cfg.mode {
                TypoMode::WithinBudget if rng.gen_bool(cfg.typo_rate) => within_budget(t, &cfg.schedule, &mut rng),
                TypoMode::WithinBudget => t.clone(),
                TypoMode::BeyondBudget => beyond_budget(t, &record, &cfg.schedule, &mut rng),
            })
            .collect();
        let before = rng.gen_range(0..=cfg.distractors);
        let after = cfg.distractors - before;
        let mut tokens: Vec<String> = (0..before).map(|_| filler(&mut rng)).collect();
        tokens.extend(name);
        tokens.extend((0..after).map(|_| filler(&mut rng)));
        if let Some(n) = cfg.query_tokens {
            while tokens.len() < n {
                tokens.push(filler(&mut rng));
            }
        }
        let mut text = tokens.join(" ").to_uppercase();
        if cfg.mode == TypoMode::BeyondBudget {
            // Joined neighbours could still land near a record token.
            let q = normalize_text(&text).into_vec();
            let reachable = all_windows(&q)
                .iter()
                .any(|w| record.iter().any(|r| levenshtein(w, r) as f64 <= cfg.schedule.allowed(w.len().max(r.len()))));
            if reachable {
                text = beyond_budget_text(&record, cfg, &mut rng);
            }
        }
        queries.push(LabeledQuery {
            query_text: text,
            expected: BTreeSet::from([doc.doc_id]),
        });
    }
    for _ in 0..cfg.n_negatives {
        let n = cfg.query_tokens.unwrap_or(cfg.distractors.max(1));
        let text = (0..n).map(|_| filler(&mut rng)).collect::<Vec<_>>().join(" ");
        queries.push(LabeledQuery {
            query_text: text,
            expected: BTreeSet::new(),
        });
    }
    SynthCorpus { documents, queries }
}

/// The corrupted record tokens alone, regenerated until no token or window
/// is within budget of a record token.
fn beyond_budget_text(record: &[String], cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> String {
    loop {
        let q: Vec<String> = record
            .iter()
            .map(|t| beyond_budget(t, record, &cfg.schedule, rng))
            .collect();
        let reachable = all_windows(&q)
            .iter()
            .any(|w| record.iter().any(|r| levenshtein(w, r) as f64 <= cfg.schedule.allowed(w.len().max(r.len()))));
        if !reachable {
            return q.join(" ").to_uppercase();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_deterministic_and_distinct() {
        let a = synth_names(500, 3);
        assert_eq!(a, synth_names(500, 3));
        assert_ne!(a, synth_names(500, 4));
        let names: HashSet<&str> = a.iter().map(|d| d.raw_name.as_str()).collect();
        assert_eq!(names.len(), 500);
        assert!(a.iter().all(|d| d.tokens.len() >= 2));
        assert_eq!(a.last().unwrap().doc_id, 500);
    }

    #[test]
    fn within_budget_typos_respect_schedule() {
        let cfg = SynthConfig {
            typo_rate: 1.0,
            distractors: 0,
            ..SynthConfig::default()
        };
        let corpus = synth_corpus(&cfg);
        for q in &corpus.queries {
            let id = *q.expected.iter().next().unwrap();
            let doc = &corpus.documents[id as usize - 1];
            let got = normalize_text(&q.query_text);
            assert_eq!(got.len(), doc.tokens.len());
            for (a, b) in got.iter().zip(doc.tokens.iter()) {
                assert!(levenshtein(a, b) as f64 <= cfg.schedule.allowed(a.len().max(b.len())));
            }
        }
    }

    #[test]
    fn beyond_budget_typos_escape_every_record_token() {
        let cfg = SynthConfig {
            mode: TypoMode::BeyondBudget,
            n_queries: 50,
            ..SynthConfig::default()
        };
        let corpus = synth_corpus(&cfg);
        for q in &corpus.queries {
            let id = *q.expected.iter().next().unwrap();
            let doc = &corpus.documents[id as usize - 1];
            let tokens = normalize_text(&q.query_text).into_vec();
            for w in all_windows(&tokens) {
                for r in doc.tokens.iter() {
                    assert!(levenshtein(&w, r) as f64 > cfg.schedule.allowed(w.len().max(r.len())));
                }
            }
        }
    }

    #[test]
    fn padding_and_negatives() {
        let cfg = SynthConfig {
            n_queries: 20,
            n_negatives: 5,
            query_tokens: Some(5),
            distractors: 0,
            ..SynthConfig::default()
        };
        let corpus = synth_corpus(&cfg);
        assert_eq!(corpus.queries.len(), 25);
        assert!(corpus.queries.iter().all(|q| normalize_text(&q.query_text).len() >= 5));
        assert!(corpus.queries[20..].iter().all(|q| q.expected.is_empty()));
    }
}
