#![allow(dead_code)]

pub mod corpus;

use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use spiderq::service::{router, AppState};
use spiderq::store::Store;

pub const EXAMPLE: &str = include_str!("../fixtures/example.ssd");

pub fn app(data_dir: &Path) -> Router {
    let store = Store::open(data_dir).unwrap();
    router(Arc::new(AppState { store, ui_dir: None }))
}

pub async fn send(app: &Router, method: Method, uri: &str, body: impl Into<Body>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri).body(body.into()).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

pub async fn send_json(app: &Router, method: Method, uri: &str, body: Value) -> (StatusCode, Value) {
    let (status, bytes) = send(app, method, uri, body.to_string()).await;
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

pub async fn get_json(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (status, bytes) = send(app, Method::GET, uri, Body::empty()).await;
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

pub async fn get_text(app: &Router, uri: &str) -> (StatusCode, String) {
    let (status, bytes) = send(app, Method::GET, uri, Body::empty()).await;
    (status, String::from_utf8(bytes).unwrap())
}

/// Uploads `text` and returns the schema id.
pub async fn upload(app: &Router, text: &str) -> String {
    let (status, bytes) = send(app, Method::POST, "/schemas", text.to_string()).await;
    assert_eq!(status, StatusCode::CREATED, "{}", String::from_utf8_lossy(&bytes));
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    v["id"].as_str().unwrap().to_string()
}

/// Starts a session and returns its id.
pub async fn open_session(app: &Router, schema_id: &str, root: &str) -> String {
    let (status, v) = send_json(
        app,
        Method::POST,
        "/sessions",
        serde_json::json!({"schema_id": schema_id, "root_type": root}),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}
