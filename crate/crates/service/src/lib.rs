//! HTTP API over the temporal graph engine.
//!
//! | route | result |
//! |---|---|
//! | `GET /health` | 200 |
//! | `POST /graphs` | 201 `{"graph_id": n}` or 400 |
//! | `GET /graphs/{id}` | graph document |
//! | `POST /graphs/{id}/query` | result document; `x-tgql-rows`, `x-tgql-elapsed-ms` headers |
//! | `GET /graphs/{id}/snapshot?t=&q=` | result document at instant `t` |
//! | `GET /graphs/{id}/range` | `{min_instant, max_instant, has_now}` or 204 |
//!
//! Result bodies are exactly the bytes `tgql query --format json` prints.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::{Arc, RwLock};
use std::time::Instant as Clock;

use axum::body::Bytes;
use axum::extract::{Path, Query as UrlQuery, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value as JsonValue};
use tower_http::cors::CorsLayer;

use tgraph_core::engine::{evaluate, EngineError};
use tgraph_core::io::{load, save, LoadError, LoadOptions};
use tgraph_core::model::TemporalGraph;
use tgraph_core::query::{parse, SyntaxError, TemporalModifier};
use tgraph_core::temporal::{Instant, IntervalEnd};

pub const ROWS_HEADER: &str = "x-tgql-rows";
pub const ELAPSED_HEADER: &str = "x-tgql-elapsed-ms";

/// Registry of immutable graphs, keyed by sequential id from 1.
#[derive(Clone, Default)]
pub struct AppState {
    inner: Arc<RwLock<Registry>>,
}

#[derive(Default)]
struct Registry {
    graphs: BTreeMap<u64, Arc<TemporalGraph>>,
    next: u64,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores `g` and returns its id.
    pub fn insert(&self, g: TemporalGraph) -> u64 {
        let mut reg = self.inner.write().expect("registry lock");
        reg.next += 1;
        let id = reg.next;
        reg.graphs.insert(id, Arc::new(g));
        id
    }

    pub fn get(&self, id: u64) -> Option<Arc<TemporalGraph>> {
        self.inner.read().expect("registry lock").graphs.get(&id).cloned()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(|| async { StatusCode::OK }))
        .route("/graphs", post(create_graph))
        .route("/graphs/{id}", get(get_graph))
        .route("/graphs/{id}/query", post(run_query))
        .route("/graphs/{id}/snapshot", get(snapshot))
        .route("/graphs/{id}/range", get(range))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}

struct ApiError {
    status: StatusCode,
    body: JsonValue,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl ApiError {
    fn not_found(id: u64) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            body: json!({ "error": "not_found", "message": format!("no graph with id {id}") }),
        }
    }

    fn syntax(e: &SyntaxError) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: json!({
                "error": "syntax",
                "message": e.to_string(),
                "line": e.line,
                "column": e.column,
                "expected": e.expected,
            }),
        }
    }

    fn semantic(e: &EngineError) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: json!({ "error": "semantic", "message": e.to_string() }),
        }
    }

    fn load(e: &LoadError) -> Self {
        let body = match e {
            LoadError::Parse { line, column, .. } => json!({
                "error": "parse",
                "message": e.to_string(),
                "line": line,
                "column": column,
            }),
            LoadError::ValidationFailed(violations) => json!({
                "error": "validation",
                "message": e.to_string(),
                "violations": violations,
            }),
            _ => json!({ "error": "invalid_document", "message": e.to_string() }),
        };
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body,
        }
    }
}

fn document(bytes: Vec<u8>) -> Response {
    (
        [(header::CONTENT_TYPE, HeaderValue::from_static("application/json"))],
        bytes,
    )
        .into_response()
}

fn lookup(state: &AppState, id: u64) -> Result<Arc<TemporalGraph>, ApiError> {
    state.get(id).ok_or_else(|| ApiError::not_found(id))
}

async fn create_graph(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let loaded = load(&body, LoadOptions::default()).map_err(|e| ApiError::load(&e))?;
    let id = state.insert(loaded.graph);
    Ok((StatusCode::CREATED, Json(json!({ "graph_id": id }))).into_response())
}

async fn get_graph(State(state): State<AppState>, Path(id): Path<u64>) -> Result<Response, ApiError> {
    let g = lookup(&state, id)?;
    Ok(document(save(&g)))
}

#[derive(Deserialize)]
pub struct QueryRequest {
    pub query: String,
    pub now: Option<Instant>,
}

async fn run_query(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    Json(req): Json<QueryRequest>,
) -> Result<Response, ApiError> {
    let g = lookup(&state, id)?;
    let q = parse(&req.query).map_err(|e| ApiError::syntax(&e))?;
    let started = Clock::now();
    let out = evaluate(&g, &q, req.now.unwrap_or_else(|| g.default_now()))
        .map_err(|e| ApiError::semantic(&e))?;
    let elapsed = started.elapsed().as_millis();
    let mut resp = document(save(&out.graph));
    let headers = resp.headers_mut();
    headers.insert(ROWS_HEADER, HeaderValue::from(out.rows));
    headers.insert(ELAPSED_HEADER, HeaderValue::from(elapsed as u64));
    Ok(resp)
}

#[derive(Deserialize)]
struct SnapshotParams {
    t: Option<String>,
    q: Option<String>,
}

fn parse_instant(text: &str) -> Option<IntervalEnd> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("now") {
        Some(IntervalEnd::Now)
    } else {
        text.parse().ok().map(IntervalEnd::At)
    }
}

async fn snapshot(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    UrlQuery(params): UrlQuery<SnapshotParams>,
) -> Result<Response, ApiError> {
    let g = lookup(&state, id)?;
    let raw = params.t.unwrap_or_default();
    let t = parse_instant(&raw).ok_or_else(|| ApiError {
        status: StatusCode::UNPROCESSABLE_ENTITY,
        body: json!({
            "error": "bad_instant",
            "message": format!("`{raw}` is not an instant; expected an integer or Now"),
        }),
    })?;
    let now = g.default_now();
    let result = match params.q.as_deref().map(str::trim).filter(|q| !q.is_empty()) {
        None => {
            let at = t.resolve(now);
            g.induced(|n| n.interval.contains_instant(at, now))
        }
        Some(text) => {
            let mut q = parse(text).map_err(|e| ApiError::syntax(&e))?;
            q.temporal = Some(TemporalModifier::Snapshot(t));
            evaluate(&g, &q, now).map_err(|e| ApiError::semantic(&e))?.graph
        }
    };
    Ok(document(save(&result)))
}

async fn range(State(state): State<AppState>, Path(id): Path<u64>) -> Result<Response, ApiError> {
    let g = lookup(&state, id)?;
    Ok(match g.instant_range() {
        None => StatusCode::NO_CONTENT.into_response(),
        Some((lo, hi, has_now)) => Json(json!({
            "min_instant": lo,
            "max_instant": hi,
            "has_now": has_now,
        }))
        .into_response(),
    })
}
