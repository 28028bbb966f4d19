//! HTTP session service.
//!
//! | route | |
//! |---|---|
//! | `POST /schemas` | upload schema text |
//! | `GET /schemas`, `GET /schemas/{id}` | list / fetch |
//! | `GET /schemas/{id}/graph` | schema graph document |
//! | `POST /sessions` | `{schema_id, root_type}` |
//! | `GET /sessions/{id}` | session state |
//! | `POST /sessions/{id}/ops` | `{op: prune\|respider, node}` or `{op: spider, root}` |
//! | `GET /sessions/{id}/expression?format=expr\|verbal\|tree\|json` | |
//! | `/ui/*` | static files |

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

use spiderq_core::SpiderError;

use crate::doc::{ProblemDoc, SchemaGraphDoc, SpiderGraphDoc};
use crate::session::{self, Format, LoadedSchema, LogEntry, Op, OpError, Rendering, Session};
use crate::store::{new_id, now_ms, Store, StoreError};

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error("schema has problems")]
    InvalidSchema(Vec<ProblemDoc>),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) | ApiError::InvalidSchema(_) => StatusCode::BAD_REQUEST,
            ApiError::Store(StoreError::NotFound(_)) => StatusCode::NOT_FOUND,
            ApiError::Store(_) | ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
            ApiError::Op(OpError::UnknownRootType(_) | OpError::BadNodeId(_)) => StatusCode::BAD_REQUEST,
            ApiError::Op(OpError::Rejected(SpiderError::UnknownNode(_))) => StatusCode::NOT_FOUND,
            ApiError::Op(OpError::Rejected(_)) => StatusCode::CONFLICT,
            ApiError::Op(OpError::TooLarge) => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            ApiError::BadRequest(_) => "bad-request",
            ApiError::InvalidSchema(_) => "invalid-schema",
            ApiError::Store(StoreError::NotFound(_)) => "not-found",
            ApiError::Store(_) | ApiError::Internal(_) => "internal",
            ApiError::Op(OpError::UnknownRootType(_)) => "unknown-root-type",
            ApiError::Op(OpError::BadNodeId(_)) => "bad-node-id",
            ApiError::Op(OpError::Rejected(SpiderError::UnknownNode(_))) => "unknown-node",
            ApiError::Op(OpError::Rejected(SpiderError::NotALeaf(_))) => "not-a-leaf",
            ApiError::Op(OpError::Rejected(SpiderError::PruneRoot)) => "prune-root",
            ApiError::Op(OpError::Rejected(_)) => "rejected",
            ApiError::Op(OpError::TooLarge) => "too-large",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status();
        if status.is_server_error() {
            tracing::error!(error = %self, "request failed");
        }
        let mut body = json!({"error": {"code": self.code(), "message": self.to_string()}});
        if let ApiError::InvalidSchema(problems) = &self {
            body["violations"] = serde_json::to_value(problems).expect("serializable");
        }
        (status, Json(body)).into_response()
    }
}

pub struct AppState {
    pub store: Store,
    pub ui_dir: Option<PathBuf>,
}

pub fn router(state: Arc<AppState>) -> Router {
    let ui = match &state.ui_dir {
        Some(dir) => Router::new().fallback_service(ServeDir::new(dir).append_index_html_on_directories(true)),
        None => Router::new().fallback(|| async { Html(PLACEHOLDER_UI) }),
    };
    Router::new()
        .route("/healthz", get(|| async { "ok\n" }))
        .route("/schemas", post(create_schema).get(list_schemas))
        .route("/schemas/{id}", get(get_schema))
        .route("/schemas/{id}/graph", get(get_schema_graph))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/ops", post(apply_op))
        .route("/sessions/{id}/expression", get(get_expression))
        .nest_service("/ui", ui)
        .with_state(state)
}

const PLACEHOLDER_UI: &str = "<!doctype html>\n<title>spiderq</title>\n<p>No UI directory configured. \
Start the server with <code>--ui-dir</code> to serve one.</p>\n";

fn parse_json<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(format!("malformed request body: {e}")))
}

fn blocking_err(e: tokio::task::JoinError) -> ApiError {
    ApiError::Internal(format!("worker failed: {e}"))
}

async fn create_schema(State(state): State<Arc<AppState>>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let text = std::str::from_utf8(&body).map_err(|_| ApiError::BadRequest("schema text must be UTF-8".into()))?;
    let loaded = LoadedSchema::parse(text).map_err(|e| ApiError::InvalidSchema(ProblemDoc::from_ingest(&e)))?;
    let id = state.store.put_schema(loaded)?;
    tracing::info!(%id, "schema stored");
    Ok((StatusCode::CREATED, Json(json!({"id": id}))))
}

async fn list_schemas(State(state): State<Arc<AppState>>) -> Result<Json<serde_json::Value>, ApiError> {
    Ok(Json(json!({"schemas": state.store.schema_ids()?})))
}

async fn get_schema(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let schema = state.store.schema(&id)?;
    let types: Vec<String> = schema.graph.nodes().iter().map(|t| t.to_string()).collect();
    Ok(Json(json!({"id": id, "text": schema.text, "types": types})).into_response())
}

async fn get_schema_graph(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<SchemaGraphDoc>, ApiError> {
    let schema = state.store.schema(&id)?;
    Ok(Json(SchemaGraphDoc::new(&schema.graph, &schema.schema)))
}

#[derive(Debug, Deserialize)]
struct NewSession {
    schema_id: String,
    root_type: String,
}

/// A session together with the expression of its current tree.
#[derive(Debug, Serialize)]
pub struct SessionView {
    #[serde(flatten)]
    pub session: Session,
    pub expression: String,
    pub verbalization: String,
}

fn view(session: Session, schema: &LoadedSchema) -> Result<SessionView, ApiError> {
    let tree = session.tree().map_err(|e| ApiError::Internal(e.to_string()))?;
    let r = Rendering::new(&schema.schema, &tree).map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(SessionView { session, expression: r.expression, verbalization: r.verbalization })
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let req: NewSession = parse_json(&body)?;
    let schema = state.store.schema(&req.schema_id)?;
    let state2 = state.clone();
    let view = tokio::task::spawn_blocking(move || -> Result<SessionView, ApiError> {
        let tree = session::start(&schema, &req.root_type)?;
        let at = now_ms();
        let s = Session {
            id: new_id(),
            schema_id: req.schema_id,
            root_type: req.root_type.clone(),
            graph: SpiderGraphDoc::new(&tree, &schema.schema),
            log: vec![LogEntry { op: Op::Spider { root: req.root_type }, at }],
            created: at,
            updated: at,
        };
        state2.store.put_session(&s)?;
        view(s, &schema)
    })
    .await
    .map_err(blocking_err)??;
    tracing::info!(id = %view.session.id, "session created");
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let s = state.store.session(&id)?;
    let schema = state.store.schema(&s.schema_id)?;
    Ok(Json(view(s, &schema)?))
}

/// Mutations of one session are serialized by its lock, so concurrent
/// requests are applied one after another, each to the previous result.
async fn apply_op(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SessionView>, ApiError> {
    let op: Op = parse_json(&body)?;
    let lock = state.store.session_lock(&id);
    let _guard = lock.lock().await;
    let mut s = state.store.session(&id)?;
    let schema = state.store.schema(&s.schema_id)?;
    let state2 = state.clone();
    let view = tokio::task::spawn_blocking(move || -> Result<SessionView, ApiError> {
        let tree = s.tree().map_err(|e| ApiError::Internal(e.to_string()))?;
        let next = session::apply(&schema, &tree, &op)?;
        if let Op::Spider { root } = &op {
            s.root_type = root.clone();
        }
        s.graph = SpiderGraphDoc::new(&next, &schema.schema);
        s.updated = now_ms();
        s.log.push(LogEntry { op, at: s.updated });
        state2.store.put_session(&s)?;
        view(s, &schema)
    })
    .await
    .map_err(blocking_err)??;
    Ok(Json(view))
}

#[derive(Debug, Deserialize)]
struct ExpressionQuery {
    format: Option<Format>,
}

/// Same bytes as `spiderq spider --emit <format>`.
async fn get_expression(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<ExpressionQuery>,
) -> Result<Response, ApiError> {
    let s = state.store.session(&id)?;
    let schema = state.store.schema(&s.schema_id)?;
    let tree = s.tree().map_err(|e| ApiError::Internal(e.to_string()))?;
    let r = Rendering::new(&schema.schema, &tree).map_err(|e| ApiError::Internal(e.to_string()))?;
    let format = q.format.unwrap_or(Format::Expr);
    let content_type = match format {
        Format::Expr | Format::Verbal => "text/plain; charset=utf-8",
        Format::Tree | Format::Json => "application/json",
    };
    Ok(([(header::CONTENT_TYPE, content_type)], r.emit(format)).into_response())
}
