//! End-to-end screening: normalize, expand, search, filter, rank, merge.

use crate::filter::FilterConfig;
use crate::forest::{Forest, SearchConfig};
use crate::index::Document;
use crate::ingest::{screenable_text, InputFormat};
use crate::normalize::{expand_query, normalize_text, ExpandedQuery, DEFAULT_WINDOW_LIMIT};
use crate::rank::{ScoredMatch, ScoredResult};
use crate::Result;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Longest run of neighbouring query tokens joined into one window.
    pub window_limit: usize,
    pub search: SearchConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            window_limit: DEFAULT_WINDOW_LIMIT,
            search: SearchConfig::default(),
        }
    }
}

/// Per-request overrides of the engine configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    pub k: Option<usize>,
    pub sigma: Option<f64>,
    pub weighted: Option<bool>,
}

/// The answer to one screening request.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenReport {
    pub query: String,
    pub results: Vec<ScoredResult>,
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

struct Rounded<'a, T>(&'a T);

impl Serialize for Rounded<'_, ScoredMatch> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.0;
        let mut st = s.serialize_struct("Match", 4)?;
        st.serialize_field("q", &m.q)?;
        st.serialize_field("d", &m.d)?;
        st.serialize_field("cost", &round4(m.cost))?;
        st.serialize_field("sim", &round4(m.sim))?;
        st.end()
    }
}

impl Serialize for Rounded<'_, ScoredResult> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.0;
        let matches: Vec<_> = r.matches.iter().map(Rounded).collect();
        let mut st = s.serialize_struct("Result", 4)?;
        st.serialize_field("doc_id", &r.doc_id)?;
        st.serialize_field("name", &r.name)?;
        st.serialize_field("score", &round4(r.score))?;
        st.serialize_field("matches", &matches)?;
        st.end()
    }
}

/// Scores, costs and similarities are written rounded to 4 decimals.
impl Serialize for ScreenReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let results: Vec<_> = self.results.iter().map(Rounded).collect();
        let mut st = s.serialize_struct("ScreenReport", 2)?;
        st.serialize_field("query", &self.query)?;
        st.serialize_field("results", &results)?;
        st.end()
    }
}

impl ScreenReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// A loaded forest together with its default configuration.
pub struct Engine {
    forest: Forest,
    config: EngineConfig,
}

impl Engine {
    pub fn build(documents: Vec<Document>, n_shards: usize, config: EngineConfig) -> Result<Self> {
        Self::new(Forest::build(documents, n_shards)?, config)
    }

    pub fn new(forest: Forest, config: EngineConfig) -> Result<Self> {
        config.search.filter.validate()?;
        Ok(Engine { forest, config })
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn expand(&self, text: &str) -> ExpandedQuery {
        expand_query(normalize_text(text), self.config.window_limit)
    }

    /// Screens free text with the default configuration.
    pub fn screen(&self, text: &str) -> ScreenReport {
        self.screen_with(text, InputFormat::Text, Overrides::default())
            .expect("default configuration is valid")
    }

    /// Screens `payload`, read according to `format`, with `overrides`
    /// applied on top of the default configuration.
    pub fn screen_with(&self, payload: &str, format: InputFormat, overrides: Overrides) -> Result<ScreenReport> {
        let mut cfg = self.config.search.clone();
        cfg.filter = FilterConfig {
            k: overrides.k.unwrap_or(cfg.filter.k),
            sigma: overrides.sigma.unwrap_or(cfg.filter.sigma),
        };
        cfg.filter.validate()?;
        if let Some(w) = overrides.weighted {
            cfg.weighted = w;
        }
        let text = screenable_text(payload, format)?;
        let query = self.expand(&text);
        let results = self.forest.search(&query, &cfg)?;
        Ok(ScreenReport {
            query: payload.to_string(),
            results,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{CostMatrices, ThresholdSchedule};
    use std::sync::Arc;

    fn reference_list() -> Vec<Document> {
        [
            (1, "MARIAN OYA CELTIK"),
            (2, "KWANGSON BANKING CO."),
            (3, "KBC FINANCIAL INC"),
            (4, "HUSSEIN OZDEN CAN"),
            (5, "TAMERLAAN TZARNAEV"),
            (6, "AHMET EMRE BUDUR"),
        ]
        .into_iter()
        .map(|(id, n)| Document::new(id, n))
        .collect()
    }

    #[test]
    fn serialized_report_rounds() {
        let r = ScreenReport {
            query: "q".into(),
            results: vec![ScoredResult {
                doc_id: 7,
                name: "X".into(),
                score: 100.0 * 2.0 / 3.0,
                matches: vec![ScoredMatch {
                    q: "a".into(),
                    d: "b".into(),
                    cost: 0.123456,
                    sim: 1.0 / 3.0,
                }],
            }],
        };
        assert_eq!(
            r.to_json(),
            r#"{"query":"q","results":[{"doc_id":7,"name":"X","score":66.6667,"matches":[{"q":"a","d":"b","cost":0.1235,"sim":0.3333}]}]}"#
        );
    }

    #[test]
    fn misspelled_name_found_with_lower_sigma() {
        let engine = Engine::build(reference_list(), 2, EngineConfig::default()).unwrap();
        let o = Overrides {
            sigma: Some(50.0),
            ..Overrides::default()
        };
        let report = engine.screen_with("MARIA CELTIQ", InputFormat::Text, o).unwrap();
        assert_eq!(report.results[0].doc_id, 1);
        let r = &report.results[0];
        // maria~marian (1 edit) and celtiq~celtik (1 edit), oya unmatched.
        assert_eq!(r.matches.len(), 2);
        assert!(r.score > 50.0 && r.score < 60.0, "{}", r.score);
        assert!(engine.screen("MARIA CELTIQ").results.is_empty());
    }

    #[test]
    fn true_negative_and_exact_token() {
        let engine = Engine::build(reference_list(), 1, EngineConfig::default()).unwrap();
        assert!(engine.screen("INVOICE RECEIPT").results.is_empty());
        let report = engine
            .screen_with(
                "435021 BANK KBC",
                InputFormat::Text,
                Overrides {
                    sigma: Some(0.0),
                    ..Overrides::default()
                },
            )
            .unwrap();
        let kbc = report.results.iter().find(|r| r.doc_id == 3).unwrap();
        assert!(kbc.matches.iter().any(|m| m.d == "kbc" && m.cost == 0.0));
        // "bank" is 3 edits from "banking", above the length-7 budget.
        assert!(report.results.iter().all(|r| r.doc_id != 2));
    }

    #[test]
    fn mt_payload_and_overrides() {
        let engine = Engine::build(reference_list(), 3, EngineConfig::default()).unwrap();
        let sample = include_str!("../tests/data/sample_mt103.txt");
        let report = engine.screen_with(sample, InputFormat::Mt, Overrides::default()).unwrap();
        assert_eq!(report.results[0].doc_id, 5);
        assert_eq!(report.results[0].score, 100.0);
        assert!(engine.screen_with("x", InputFormat::Mt, Overrides::default()).is_err());
        let bad_k = Overrides {
            k: Some(0),
            ..Overrides::default()
        };
        assert!(engine.screen_with("x", InputFormat::Text, bad_k).is_err());
    }

    #[test]
    fn weighted_costs_change_scores() {
        let mut costs = CostMatrices::uniform();
        costs.set(crate::search::EditOp::Substitute, 'o', 'u', 0.2).unwrap();
        costs.set(crate::search::EditOp::Insert, 's', 's', 0.2).unwrap();
        let config = EngineConfig {
            search: SearchConfig {
                costs: Arc::new(costs),
                schedule: ThresholdSchedule::default(),
                filter: FilterConfig { k: 20, sigma: 0.0 },
                weighted: true,
            },
            ..EngineConfig::default()
        };
        let engine = Engine::build(reference_list(), 1, config).unwrap();
        let w = engine.screen("HOSEIN OZDEN CAN");
        let u = engine
            .screen_with(
                "HOSEIN OZDEN CAN",
                InputFormat::Text,
                Overrides {
                    weighted: Some(false),
                    ..Overrides::default()
                },
            )
            .unwrap();
        assert_eq!(w.results[0].doc_id, 4);
        assert_eq!(u.results[0].doc_id, 4);
        assert!(w.results[0].score > u.results[0].score);
        assert_eq!(w.results[0].matches[0].cost, 0.4);
    }
}
