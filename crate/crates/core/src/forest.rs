//! A forest of per-shard tries sharing one set of corpus statistics.
//!
//! Each query fans out to every shard, which searches, filters, scores and
//! keeps its local top-k. The coordinator merges the local lists and keeps
//! the global top-k. Because every shard scores and filters against the
//! same global statistics, the merged output does not depend on how the
//! documents were split.

use crate::filter::{filter_matches, FilterConfig};
use crate::index::{DictionaryStats, Document, TrieIndex};
use crate::normalize::ExpandedQuery;
use crate::rank::{score_document, top_k, ScoredResult};
use crate::search::{search_query, CostMatrices, ThresholdSchedule};
use crate::{DocId, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::Arc;

/// Everything a shard needs to answer a query.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub costs: Arc<CostMatrices>,
    pub schedule: ThresholdSchedule,
    pub filter: FilterConfig,
    /// Score with weighted costs rather than plain Levenshtein distance.
    pub weighted: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            costs: Arc::new(CostMatrices::uniform()),
            schedule: ThresholdSchedule::default(),
            filter: FilterConfig::default(),
            weighted: true,
        }
    }
}

/// Which shard holds each document.
#[derive(Debug, Clone, PartialEq)]
pub struct ShardPlan {
    pub n_shards: usize,
    pub assignment: HashMap<DocId, usize>,
}

impl ShardPlan {
    /// Deals documents out in ascending id order, one shard after another.
    pub fn round_robin(doc_ids: impl IntoIterator<Item = DocId>, n_shards: usize) -> Result<Self> {
        let mut ids: Vec<DocId> = doc_ids.into_iter().collect();
        if ids.is_empty() {
            return Err(Error::NoDocuments);
        }
        if n_shards == 0 || n_shards > ids.len() {
            return Err(Error::TooManyShards {
                docs: ids.len(),
                shards: n_shards,
            });
        }
        ids.sort_unstable();
        let assignment = ids
            .into_iter()
            .enumerate()
            .map(|(i, id)| (id, i % n_shards))
            .collect();
        Ok(ShardPlan { n_shards, assignment })
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_shards];
        for &s in self.assignment.values() {
            sizes[s] += 1;
        }
        sizes
    }
}

pub struct Forest {
    stats: Arc<DictionaryStats>,
    shards: Vec<TrieIndex>,
    plan: ShardPlan,
}

impl Forest {
    pub fn build(documents: Vec<Document>, n_shards: usize) -> Result<Self> {
        let stats = DictionaryStats::from_documents(documents)?;
        Self::from_stats(Arc::new(stats), n_shards)
    }

    pub fn from_stats(stats: Arc<DictionaryStats>, n_shards: usize) -> Result<Self> {
        let plan = ShardPlan::round_robin(stats.docs().iter().map(|d| d.id), n_shards)?;
        let shards = (0..n_shards)
            .map(|s| TrieIndex::for_documents(&stats, stats.docs().iter().skip(s).step_by(n_shards)))
            .collect();
        Ok(Forest { stats, shards, plan })
    }

    pub fn stats(&self) -> &Arc<DictionaryStats> {
        &self.stats
    }

    pub fn shards(&self) -> &[TrieIndex] {
        &self.shards
    }

    pub fn plan(&self) -> &ShardPlan {
        &self.plan
    }

    pub fn node_count(&self) -> usize {
        self.shards.iter().map(TrieIndex::node_count).sum()
    }

    /// Local top-k of one shard.
    pub fn search_shard(&self, shard: usize, query: &ExpandedQuery, cfg: &SearchConfig) -> Result<Vec<ScoredResult>> {
        search_index(&self.stats, &self.shards[shard], query, cfg)
    }

    /// Global top-k, searching the shards in parallel.
    pub fn search(&self, query: &ExpandedQuery, cfg: &SearchConfig) -> Result<Vec<ScoredResult>> {
        cfg.filter.validate()?;
        let locals = (0..self.shards.len())
            .into_par_iter()
            .map(|s| self.search_shard(s, query, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(merge(locals, &cfg.filter))
    }
}

/// Search, filter, score and local top-k over one trie.
pub fn search_index(
    stats: &DictionaryStats,
    index: &TrieIndex,
    query: &ExpandedQuery,
    cfg: &SearchConfig,
) -> Result<Vec<ScoredResult>> {
    let candidates = search_query(index, query, &cfg.costs, &cfg.schedule);
    let kept = filter_matches(candidates, stats, &cfg.filter);
    let scored = kept
        .values()
        .map(|set| score_document(stats, set, cfg.weighted))
        .collect::<Result<Vec<_>>>()?;
    Ok(top_k(scored, &cfg.filter))
}

/// Concatenates per-shard lists and keeps the global top-k.
pub fn merge(locals: Vec<Vec<ScoredResult>>, cfg: &FilterConfig) -> Vec<ScoredResult> {
    top_k(locals.into_iter().flatten().collect(), cfg)
}

/// Coordinator to shard message.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShardRequest {
    pub query: ExpandedQuery,
    pub filter: FilterConfig,
    pub weighted: bool,
}

/// Shard to coordinator message.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ShardResponse {
    Results(Vec<ScoredResult>),
    Error(String),
}

const MAX_FRAME: usize = 64 << 20;

/// Writes one big-endian length-prefixed JSON frame.
pub fn write_frame<T: Serialize>(w: &mut impl Write, msg: &T) -> Result<()> {
    let body = serde_json::to_vec(msg)?;
    if body.len() > MAX_FRAME {
        return Err(Error::Wire(format!("frame of {} bytes is too large", body.len())));
    }
    w.write_all(&(body.len() as u32).to_be_bytes())?;
    w.write_all(&body)?;
    w.flush()?;
    Ok(())
}

/// Reads one frame; `None` on a clean end of stream.
pub fn read_frame<T: for<'de> Deserialize<'de>>(r: &mut impl Read) -> Result<Option<T>> {
    let mut len = [0u8; 4];
    match r.read_exact(&mut len) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(e.into()),
    }
    let len = u32::from_be_bytes(len) as usize;
    if len > MAX_FRAME {
        return Err(Error::Wire(format!("frame of {len} bytes is too large")));
    }
    let mut body = vec![0; len];
    r.read_exact(&mut body)?;
    Ok(Some(serde_json::from_slice(&body)?))
}

/// Answers requests for one shard of `forest` until the peer hangs up.
/// Costs and schedule come from `base`; k, sigma and weighting from each
/// request.
pub fn serve_shard(
    forest: &Forest,
    shard: usize,
    base: &SearchConfig,
    mut stream: impl Read + Write,
) -> Result<()> {
    while let Some(req) = read_frame::<ShardRequest>(&mut stream)? {
        let cfg = SearchConfig {
            filter: req.filter,
            weighted: req.weighted,
            ..base.clone()
        };
        let resp = match cfg
            .filter
            .validate()
            .and_then(|()| forest.search_shard(shard, &req.query, &cfg))
        {
            Ok(results) => ShardResponse::Results(results),
            Err(e) => ShardResponse::Error(e.to_string()),
        };
        write_frame(&mut stream, &resp)?;
    }
    Ok(())
}

/// Client end of a shard connection.
pub struct RemoteShard<S> {
    stream: S,
}

impl<S: Read + Write> RemoteShard<S> {
    pub fn new(stream: S) -> Self {
        RemoteShard { stream }
    }

    pub fn search(&mut self, req: &ShardRequest) -> Result<Vec<ScoredResult>> {
        write_frame(&mut self.stream, req)?;
        match read_frame(&mut self.stream)? {
            Some(ShardResponse::Results(r)) => Ok(r),
            Some(ShardResponse::Error(e)) => Err(Error::Wire(e)),
            None => Err(Error::Wire("shard closed the connection".into())),
        }
    }
}

/// Fans `req` out to every remote shard and merges the answers.
pub fn search_remote<S: Read + Write + Send>(shards: &mut [RemoteShard<S>], req: &ShardRequest) -> Result<Vec<ScoredResult>> {
    let locals = shards
        .par_iter_mut()
        .map(|s| s.search(req))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(locals, &req.filter))
}
