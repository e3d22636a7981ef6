use super::LabeledQuery;
use crate::{DocId, Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// False negatives weigh 5 times as much as false positives.
pub const DEFAULT_BETA: f64 = 5.0;

/// Pair-level confusion counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    pub fn of(retrieved: &BTreeSet<DocId>, expected: &BTreeSet<DocId>) -> Self {
        let tp = retrieved.intersection(expected).count();
        Counts {
            tp,
            fp: retrieved.len() - tp,
            fn_: expected.len() - tp,
        }
    }

    /// 1 when nothing was retrieved and nothing was expected, 0 when
    /// nothing was retrieved but something was expected.
    pub fn precision(&self) -> f64 {
        match self.tp + self.fp {
            0 if self.fn_ == 0 => 1.0,
            0 => 0.0,
            n => self.tp as f64 / n as f64,
        }
    }

    /// 1 when nothing was expected.
    pub fn recall(&self) -> f64 {
        match self.tp + self.fn_ {
            0 => 1.0,
            n => self.tp as f64 / n as f64,
        }
    }
}

impl std::ops::Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            fn_: self.fn_ + o.fn_,
        }
    }
}

/// `(1 + b^2) p r / (b^2 p + r)`, 0 when both are 0.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / denom
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f_beta: f64,
}

impl Metrics {
    fn new(precision: f64, recall: f64, beta: f64) -> Self {
        Metrics {
            precision,
            recall,
            f_beta: f_beta(precision, recall, beta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub beta: f64,
    pub queries: usize,
    pub counts: Counts,
    /// From the summed counts.
    pub micro: Metrics,
    /// Per-query precision and recall averaged, F-beta of the averages.
    #[serde(rename = "macro")]
    pub macro_: Metrics,
    pub per_query: Vec<Counts>,
}

/// Scores `retrieved[i]` against `labels[i]`.
pub fn evaluate(retrieved: &[BTreeSet<DocId>], labels: &[LabeledQuery], beta: f64) -> Result<Evaluation> {
    if retrieved.len() != labels.len() {
        return Err(Error::Config(format!(
            "{} result sets for {} labeled queries",
            retrieved.len(),
            labels.len()
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Config(format!("beta must be positive, got {beta}")));
    }
    let per_query: Vec<Counts> = retrieved
        .iter()
        .zip(labels)
        .map(|(r, l)| Counts::of(r, &l.expected))
        .collect();
    let counts = per_query.iter().copied().fold(Counts::default(), |a, b| a + b);
    let n = per_query.len().max(1) as f64;
    let macro_p = per_query.iter().map(Counts::precision).sum::<f64>() / n;
    let macro_r = per_query.iter().map(Counts::recall).sum::<f64>() / n;
    Ok(Evaluation {
        beta,
        queries: per_query.len(),
        counts,
        micro: Metrics::new(counts.precision(), counts.recall(), beta),
        macro_: Metrics::new(macro_p, macro_r, beta),
        per_query,
    })
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "queries {}  tp {}  fp {}  fn {}",
            self.queries, self.counts.tp, self.counts.fp, self.counts.fn_
        )?;
        writeln!(f, "{:<8}{:>11}{:>11}{:>11}", "", "precision", "recall", format!("F{}", self.beta))?;
        for (name, m) in [("micro", &self.micro), ("macro", &self.macro_)] {
            writeln!(f, "{name:<8}{:>11.4}{:>11.4}{:>11.4}", m.precision, m.recall, m.f_beta)?;
        }
        Ok(())
    }
}
