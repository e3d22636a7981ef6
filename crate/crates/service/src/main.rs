use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sanctrie::eval::{
    check_labels, evaluate, load_labels, synth_corpus, write_labels, SynthConfig, TypoMode, DEFAULT_BETA,
};
use sanctrie::ingest::{save_snapshot, write_reference_list};
use sanctrie::{Document, InputFormat, Overrides};
use sanctrie_service::http::{router, AppState};
use sanctrie_service::{bench, load_engine, EngineOptions};
use std::collections::BTreeSet;
use std::io::Read;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "sanctrie", version, about = "Fuzzy name screening against a reference list")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the index and print a summary.
    Index {
        /// Reference list (`id<TAB>name` lines) or `.json` snapshot.
        reference: PathBuf,
        /// Also write a JSON snapshot of the documents.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
    /// Screen one payload and print the report.
    Search {
        #[arg(long)]
        index: PathBuf,
        /// Payload text. Read from stdin when absent.
        #[arg(long)]
        query: Option<String>,
        #[arg(long, default_value_t = InputFormat::Text)]
        format: InputFormat,
        #[command(flatten)]
        engine: EngineOptions,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        #[command(flatten)]
        engine: EngineOptions,
    },
    /// Time every query in a file and print per-query rows as CSV.
    Bench {
        #[arg(long)]
        index: PathBuf,
        /// One query per line.
        #[arg(long)]
        queries: PathBuf,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
        #[arg(long, default_value_t = InputFormat::Text)]
        format: InputFormat,
        #[command(flatten)]
        engine: EngineOptions,
    },
    /// Score a labeled query set.
    Eval {
        #[arg(long)]
        index: PathBuf,
        /// `query<TAB>id,id,...` lines; an empty id list marks a negative.
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BETA)]
        beta: f64,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: EngineOptions,
    },
    /// Write a synthetic reference list, labels and query file.
    Synth {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1000)]
        docs: usize,
        #[arg(long, default_value_t = 100)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        negatives: usize,
        #[arg(long, default_value_t = 0.3)]
        typo_rate: f64,
        /// Push every typo past the edit budget.
        #[arg(long)]
        beyond_budget: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    match Cli::parse().command {
        Command::Index { reference, out, shards } => {
            let opts = EngineOptions {
                shards,
                ..EngineOptions::default()
            };
            let (engine, summary) = load_engine(&reference, &opts)?;
            if let Some(out) = out {
                let docs: Vec<Document> = engine
                    .forest()
                    .stats()
                    .docs()
                    .iter()
                    .map(|d| Document::new(d.id, d.name.clone()))
                    .collect();
                save_snapshot(&docs, &out).with_context(|| format!("writing {}", out.display()))?;
            }
            println!("{}", serde_json::to_string(&summary)?);
        }
        Command::Search { index, query, format, engine } => {
            let (engine, _) = load_engine(&index, &engine)?;
            let payload = match query {
                Some(q) => q,
                None => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let start = Instant::now();
            let report = engine.screen_with(&payload, format, Overrides::default())?;
            eprintln!("latency_ms {:.3}", start.elapsed().as_secs_f64() * 1e3);
            println!("{}", report.to_json());
        }
        Command::Serve { index, addr, engine } => serve(index, addr, engine)?,
        Command::Bench {
            index,
            queries,
            repetitions,
            format,
            engine,
        } => {
            let text = std::fs::read_to_string(&queries).with_context(|| format!("reading {}", queries.display()))?;
            let path = queries;
            let queries = bench::parse_queries(&text);
            if queries.is_empty() {
                bail!("{} has no queries", path.display());
            }
            let (engine, _) = load_engine(&index, &engine)?;
            let rows = bench::run(&engine, &queries, repetitions, format, Overrides::default())?;
            print!("{}", bench::to_csv(&rows));
            eprintln!("{}", serde_json::to_string(&bench::summarize(&rows))?);
        }
        Command::Eval {
            index,
            labels,
            beta,
            json,
            engine,
        } => {
            let (engine, _) = load_engine(&index, &engine)?;
            let labels = load_labels(&labels).with_context(|| format!("reading {}", labels.display()))?;
            check_labels(&labels, engine.forest().stats())?;
            let retrieved = labels
                .iter()
                .map(|l| {
                    let report = engine.screen_with(&l.query_text, InputFormat::Text, Overrides::default())?;
                    Ok(report.results.iter().map(|r| r.doc_id).collect::<BTreeSet<_>>())
                })
                .collect::<Result<Vec<_>>>()?;
            let result = evaluate(&retrieved, &labels, beta)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&result)?);
            } else {
                print!("{result}");
            }
        }
        Command::Synth {
            out_dir,
            docs,
            queries,
            negatives,
            typo_rate,
            beyond_budget,
            seed,
        } => {
            let cfg = SynthConfig {
                n_docs: docs,
                n_queries: queries,
                n_negatives: negatives,
                typo_rate,
                mode: if beyond_budget {
                    TypoMode::BeyondBudget
                } else {
                    TypoMode::WithinBudget
                },
                seed,
                ..SynthConfig::default()
            };
            let corpus = synth_corpus(&cfg);
            std::fs::create_dir_all(&out_dir)?;
            std::fs::write(out_dir.join("reference.tsv"), write_reference_list(&corpus.documents))?;
            std::fs::write(out_dir.join("labels.tsv"), write_labels(&corpus.queries))?;
            let lines: String = corpus.queries.iter().map(|q| format!("{}\n", q.query_text)).collect();
            std::fs::write(out_dir.join("queries.txt"), lines)?;
        }
    }
    Ok(())
}

#[tokio::main]
async fn serve(index: PathBuf, addr: String, opts: EngineOptions) -> Result<()> {
    let state = Arc::new(AppState::new());
    let listener = tokio::net::TcpListener::bind(&addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    tracing::info!("listening on {addr}, loading {}", index.display());

    let loader = state.clone();
    tokio::spawn(async move {
        let mut hup = match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::hangup()) {
            Ok(s) => s,
            Err(e) => {
                tracing::error!("cannot watch SIGHUP: {e}");
                return;
            }
        };
        loop {
            let (path, o) = (index.clone(), opts.clone());
            match tokio::task::spawn_blocking(move || load_engine(&path, &o)).await {
                Ok(Ok((engine, summary))) => {
                    loader.swap(engine);
                    tracing::info!(?summary, "index loaded");
                }
                Ok(Err(e)) => tracing::error!("index load failed: {e:#}"),
                Err(e) => tracing::error!("index load panicked: {e}"),
            }
            if hup.recv().await.is_none() {
                return;
            }
            tracing::info!("reloading index");
        }
    });

    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
