use anyhow::{bail, Result};
use sanctrie::{Engine, InputFormat, Overrides};
use serde::Serialize;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub repetition: usize,
    pub query: usize,
    pub latency_ms: f64,
    pub results: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatencySummary {
    pub samples: usize,
    pub p50: f64,
    pub p95: f64,
    pub p99: f64,
    pub max: f64,
}

/// Nearest-rank percentile of sorted samples.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn summarize(rows: &[BenchRow]) -> LatencySummary {
    let mut ms: Vec<f64> = rows.iter().map(|r| r.latency_ms).collect();
    ms.sort_by(f64::total_cmp);
    LatencySummary {
        samples: ms.len(),
        p50: percentile(&ms, 50.0),
        p95: percentile(&ms, 95.0),
        p99: percentile(&ms, 99.0),
        max: *ms.last().unwrap(),
    }
}

/// Screens every query `repetitions` times, timing each call.
pub fn run(
    engine: &Engine,
    queries: &[String],
    repetitions: usize,
    format: InputFormat,
    overrides: Overrides,
) -> Result<Vec<BenchRow>> {
    if queries.is_empty() {
        bail!("no queries to run");
    }
    if repetitions == 0 {
        bail!("repetitions must be at least 1");
    }
    let mut rows = Vec::with_capacity(queries.len() * repetitions);
    for repetition in 0..repetitions {
        for (query, text) in queries.iter().enumerate() {
            let start = Instant::now();
            let report = engine.screen_with(text, format, overrides)?;
            rows.push(BenchRow {
                repetition,
                query,
                latency_ms: start.elapsed().as_secs_f64() * 1e3,
                results: report.results.len(),
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("repetition,query,latency_ms,results\n");
    for r in rows {
        writeln!(out, "{},{},{:.3},{}", r.repetition, r.query, r.latency_ms, r.results).unwrap();
    }
    out
}

/// One query per non-blank line.
pub fn parse_queries(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}
