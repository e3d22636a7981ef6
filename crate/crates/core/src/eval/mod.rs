//! Precision, recall and F-beta over labeled queries, and synthetic corpora.

mod metrics;
mod synth;

pub use metrics::{evaluate, f_beta, Counts, Evaluation, Metrics, DEFAULT_BETA};
pub use synth::{synth_corpus, synth_names, SynthConfig, SynthCorpus, TypoMode};

use crate::index::DictionaryStats;
use crate::{DocId, Error, Result};
use std::collections::BTreeSet;
use std::path::Path;

/// A query and the documents it should retrieve. An empty set marks a true
/// negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledQuery {
    pub query_text: String,
    pub expected: BTreeSet<DocId>,
}

/// Parses `query_text<TAB>doc_id[,doc_id...]` lines. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_labels(text: &str) -> Result<Vec<LabeledQuery>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (query, ids) = line
            .rsplit_once('\t')
            .ok_or_else(|| Error::format(line_no, "expected query<TAB>ids"))?;
        let expected = ids
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::format(line_no, format!("bad document id {s:?}")))
            })
            .collect::<Result<_>>()?;
        out.push(LabeledQuery {
            query_text: query.to_string(),
            expected,
        });
    }
    Ok(out)
}

pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<LabeledQuery>> {
    parse_labels(&std::fs::read_to_string(path)?)
}

pub fn write_labels(labels: &[LabeledQuery]) -> String {
    labels
        .iter()
        .map(|l| {
            let ids: Vec<String> = l.expected.iter().map(|d| d.to_string()).collect();
            format!("{}\t{}\n", l.query_text, ids.join(","))
        })
        .collect()
}

/// Fails on the first expected id missing from the dictionary.
pub fn check_labels(labels: &[LabeledQuery], stats: &DictionaryStats) -> Result<()> {
    for l in labels {
        if let Some(&id) = l.expected.iter().find(|&&id| stats.doc(id).is_none()) {
            return Err(Error::UnknownDoc(id));
        }
    }
    Ok(())
}
