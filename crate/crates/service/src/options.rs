use anyhow::{bail, Context, Result};
use clap::Args;
use sanctrie::ingest::load_documents;
use sanctrie::search::CostMatrices;
use sanctrie::{Engine, EngineConfig, FilterConfig, SearchConfig, ThresholdSchedule};
use serde::Serialize;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

/// Engine settings shared by every subcommand that screens.
#[derive(Debug, Clone, Args)]
pub struct EngineOptions {
    /// Result slots per query.
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    /// Minimum percentage score for a result.
    #[arg(long, default_value_t = 60.0)]
    pub sigma: f64,
    /// Edit budget by token length, e.g. `3:0,6:1,10:2,*:3`.
    #[arg(long, default_value_t = ThresholdSchedule::default())]
    pub thresholds: ThresholdSchedule,
    /// Cost file (`op<TAB>a<TAB>b<TAB>cost` lines), or `phonetic` for the
    /// bundled sample. Unit costs when absent.
    #[arg(long)]
    pub costs: Option<String>,
    /// Number of trie shards.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    /// Longest run of neighbouring query tokens joined into one window.
    #[arg(long, default_value_t = sanctrie::normalize::DEFAULT_WINDOW_LIMIT)]
    pub window: usize,
    /// Score with plain Levenshtein similarity even when costs are loaded.
    #[arg(long)]
    pub unweighted: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            k: 20,
            sigma: 60.0,
            thresholds: ThresholdSchedule::default(),
            costs: None,
            shards: 1,
            window: sanctrie::normalize::DEFAULT_WINDOW_LIMIT,
            unweighted: false,
        }
    }
}

impl EngineOptions {
    pub fn engine_config(&self) -> Result<EngineConfig> {
        let costs = match self.costs.as_deref() {
            None => CostMatrices::uniform(),
            Some("phonetic") => CostMatrices::phonetic_sample(),
            Some(path) => CostMatrices::load(path).with_context(|| format!("reading costs from {path}"))?,
        };
        if self.window == 0 {
            bail!("--window must be at least 1");
        }
        Ok(EngineConfig {
            window_limit: self.window,
            search: SearchConfig {
                costs: Arc::new(costs),
                schedule: self.thresholds.clone(),
                filter: FilterConfig::new(self.k, self.sigma)?,
                weighted: !self.unweighted,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSummary {
    pub docs: usize,
    /// Distinct tokens.
    pub tokens: usize,
    pub nodes: usize,
    pub shards: usize,
    pub build_ms: f64,
}

/// Loads a reference list (or a `.json` snapshot) and builds the engine.
pub fn load_engine(path: &Path, opts: &EngineOptions) -> Result<(Engine, IndexSummary)> {
    let config = opts.engine_config()?;
    let start = Instant::now();
    let docs = load_documents(path).with_context(|| format!("loading {}", path.display()))?;
    let engine = Engine::build(docs, opts.shards, config)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let forest = engine.forest();
    let summary = IndexSummary {
        docs: forest.stats().n_docs(),
        tokens: forest.stats().n_terms(),
        nodes: forest.node_count(),
        shards: forest.shards().len(),
        build_ms,
    };
    Ok((engine, summary))
}
