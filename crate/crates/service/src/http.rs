// HTTP front end: POST /screen, GET /health.

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use sanctrie::{Engine, InputFormat, Overrides};
use serde::{Deserialize, Serialize};
use std::sync::{Arc, RwLock};
use std::time::Instant;

pub const LATENCY_HEADER: &str = "x-latency-ms";

/// Holds the engine being served. Empty until the first index load
/// finishes; `swap` replaces it between requests.
#[derive(Default)]
pub struct AppState {
    engine: RwLock<Option<Arc<Engine>>>,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_engine(engine: Engine) -> Self {
        let s = Self::new();
        s.swap(engine);
        s
    }

    pub fn swap(&self, engine: Engine) -> Option<Arc<Engine>> {
        self.engine.write().unwrap().replace(Arc::new(engine))
    }

    pub fn engine(&self) -> Option<Arc<Engine>> {
        self.engine.read().unwrap().clone()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScreenRequest {
    pub text: String,
    #[serde(default)]
    pub format: InputFormat,
    pub k: Option<usize>,
    pub sigma: Option<f64>,
    pub weighted: Option<bool>,
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(ErrorBody { error: message.into() })).into_response()
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/screen", post(screen))
        .route("/health", get(health))
        .with_state(state)
}

async fn health(State(state): State<Arc<AppState>>) -> Response {
    match state.engine() {
        Some(engine) => {
            let stats = engine.forest().stats();
            let body = serde_json::json!({
                "status": "ok",
                "docs": stats.n_docs(),
                "tokens": stats.n_terms(),
                "shards": engine.forest().shards().len(),
            });
            Json(body).into_response()
        }
        None => error(StatusCode::SERVICE_UNAVAILABLE, "index not loaded"),
    }
}

async fn screen(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let Some(engine) = state.engine() else {
        return error(StatusCode::SERVICE_UNAVAILABLE, "index not loaded");
    };
    let req: ScreenRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("invalid request: {e}")),
    };
    let overrides = Overrides {
        k: req.k,
        sigma: req.sigma,
        weighted: req.weighted,
    };
    let outcome = tokio::task::spawn_blocking(move || {
        let start = Instant::now();
        let report = engine.screen_with(&req.text, req.format, overrides);
        (report, start.elapsed())
    })
    .await;
    let (report, elapsed) = match outcome {
        Ok(r) => r,
        Err(e) => return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    };
    match report {
        Ok(report) => {
            let mut resp = (
                [(axum::http::header::CONTENT_TYPE, "application/json")],
                report.to_json(),
            )
                .into_response();
            let ms = format!("{:.3}", elapsed.as_secs_f64() * 1e3);
            resp.headers_mut()
                .insert(LATENCY_HEADER, HeaderValue::from_str(&ms).unwrap());
            resp
        }
        Err(e) => error(StatusCode::BAD_REQUEST, e.to_string()),
    }
}
