use std::path::Path;
use std::process::{Command, Output};

const TABLE: &str = "1\tMARIAN OYA CELTIK\n2\tKWANGSON BANKING CO.\n3\tKBC FINANCIAL INC\n\
4\tHUSSEIN OZDEN CAN\n5\tTAMERLAAN TZARNAEV\n6\tAHMET EMRE BUDUR\n";

fn sanctrie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sanctrie")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn index_summary_and_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let refs = write(dir.path(), "ref.tsv", TABLE);
    let snap = dir.path().join("snap.json");
    let out = stdout(&sanctrie(&["index", &refs, "--out", snap.to_str().unwrap(), "--shards", "2"]));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["docs"], 6);
    assert_eq!(v["tokens"], 17);
    assert_eq!(v["shards"], 2);
    assert!(v["nodes"].as_u64().unwrap() > 0);
    let again = stdout(&sanctrie(&["index", snap.to_str().unwrap()]));
    let w: serde_json::Value = serde_json::from_str(again.trim()).unwrap();
    assert_eq!(w["docs"], 6);
    assert_eq!(w["tokens"], 17);
}

#[test]
fn bad_reference_lists() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.tsv", "");
    let o = sanctrie(&["index", &empty]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no documents"));

    let dup = write(dir.path(), "dup.tsv", "1\tA B\n2\tC D\n1\tE F\n");
    let o = sanctrie(&["index", &dup]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("duplicate document id 1"), "{err}");
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn search_prints_report_and_latency_separately() {
    let dir = tempfile::tempdir().unwrap();
    let refs = write(dir.path(), "ref.tsv", TABLE);
    let o = sanctrie(&["search", "--index", &refs, "--query", "MARIA CELTIQ", "--sigma", "50"]);
    let body = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(body.trim()).unwrap();
    assert_eq!(v["query"], "MARIA CELTIQ");
    assert_eq!(v["results"][0]["doc_id"], 1);
    assert!(!body.contains("latency"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("latency_ms"));

    let mt = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/data/sample_mt103.txt");
    let payload = std::fs::read_to_string(mt).unwrap();
    let o = sanctrie(&["search", "--index", &refs, "--format", "mt", "--query", &payload]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["results"][0]["doc_id"], 5);

    let o = sanctrie(&["search", "--index", &refs, "--query", "x", "--k", "0"]);
    assert!(!o.status.success());
    let o = sanctrie(&["search", "--index", &refs, "--query", "x", "--thresholds", "3:0,2:1"]);
    assert!(!o.status.success());
}

#[tokio::test]
async fn cli_and_http_reports_are_identical() {
    use axum::body::Body;
    use axum::http::Request;
    use http_body_util::BodyExt;
    use sanctrie_service::http::{router, AppState};
    use sanctrie_service::{load_engine, EngineOptions};
    use std::sync::Arc;
    use tower::ServiceExt;

    let dir = tempfile::tempdir().unwrap();
    let refs = write(dir.path(), "ref.tsv", TABLE);
    let (engine, _) = load_engine(Path::new(&refs), &EngineOptions::default()).unwrap();
    let state = Arc::new(AppState::with_engine(engine));
    for (q, sigma) in [("HUSEIN OZDEN", "0"), ("AHMET EMRE BUDUR", "60"), ("nothing at all", "60")] {
        let cli = stdout(&sanctrie(&["search", "--index", &refs, "--query", q, "--sigma", sigma]));
        let req = serde_json::json!({ "text": q, "sigma": sigma.parse::<f64>().unwrap() }).to_string();
        let resp = router(state.clone())
            .oneshot(Request::post("/screen").body(Body::from(req)).unwrap())
            .await
            .unwrap();
        let http = resp.into_body().collect().await.unwrap().to_bytes();
        assert_eq!(cli.trim_end().as_bytes(), &http[..], "{q}");
    }
}

#[test]
fn bench_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let refs = write(dir.path(), "ref.tsv", TABLE);
    let queries = write(dir.path(), "q.txt", "HUSSEIN CAN\n\nKBC BANK\nMARIA\n");
    let o = sanctrie(&["bench", "--index", &refs, "--queries", &queries, "--repetitions", "3"]);
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "repetition,query,latency_ms,results");
    assert_eq!(lines.len(), 1 + 3 * 3);
    let summary: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(summary["samples"], 9);
    assert!(summary["p50"].as_f64().unwrap() <= summary["p99"].as_f64().unwrap());
    assert!(summary["p99"].as_f64().unwrap() <= summary["max"].as_f64().unwrap());

    let empty = write(dir.path(), "none.txt", "\n  \n");
    let o = sanctrie(&["bench", "--index", &refs, "--queries", &empty]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no queries"));
}

#[test]
fn synth_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout(&sanctrie(&["synth", "--out-dir", d, "--docs", "300", "--queries", "40", "--negatives", "10"]));
    let refs = dir.path().join("reference.tsv");
    let labels = dir.path().join("labels.tsv");
    assert_eq!(std::fs::read_to_string(dir.path().join("queries.txt")).unwrap().lines().count(), 50);
    let o = sanctrie(&[
        "eval", "--index", refs.to_str().unwrap(), "--labels", labels.to_str().unwrap(), "--json", "--sigma", "0",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["queries"], 50);
    assert_eq!(v["beta"], 5.0);
    assert_eq!(v["micro"]["recall"], 1.0);
    let table = stdout(&sanctrie(&["eval", "--index", refs.to_str().unwrap(), "--labels", labels.to_str().unwrap()]));
    assert!(table.contains("micro") && table.contains("macro"), "{table}");

    let wrong = write(dir.path(), "wrong.tsv", "SOMEONE\t99999\n");
    let o = sanctrie(&["eval", "--index", refs.to_str().unwrap(), "--labels", &wrong]);
    assert!(!o.status.success());
}
