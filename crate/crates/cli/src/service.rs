//! HTTP JSON API used by the web front end.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use cnlcheck_core::wire::{CheckRequest, CheckResponse, PredictRequest, PredictResponse, SCHEMA_VERSION};
use cnlcheck_core::Engine;
use serde::Serialize;

use crate::bank::{Bank, Exercise};

/// Largest accepted request body.
pub const MAX_BODY: usize = 64 * 1024;

#[derive(Default)]
pub struct AppState {
    pub engine: Engine,
    pub bank: Bank,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/check", post(check))
        .route("/api/predict-check", post(predict))
        .route("/api/exercises", get(list_exercises))
        .route("/api/exercises/{id}", get(exercise))
        .layer(DefaultBodyLimit::max(MAX_BODY))
        .with_state(Arc::new(state))
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    let body = serde_json::json!({ "schema": SCHEMA_VERSION, "error": message.into() });
    json(status, format!("{body}\n"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("response serializes");
    s.push('\n');
    s
}

/// Body checks shared by the POST endpoints: size, encoding, then JSON.
fn decode<T: serde::de::DeserializeOwned>(body: Result<Bytes, BytesRejection>) -> Result<T, (StatusCode, String)> {
    let unprocessable = |msg: &str| (StatusCode::UNPROCESSABLE_ENTITY, msg.to_string());
    let body = body.map_err(|_| unprocessable("request body is unreadable or exceeds 64 KiB"))?;
    let text = std::str::from_utf8(&body).map_err(|_| unprocessable("request body is not valid UTF-8"))?;
    serde_json::from_str(text).map_err(|e| (StatusCode::BAD_REQUEST, format!("malformed request: {e}")))
}

async fn check(State(state): State<Arc<AppState>>, body: Result<Bytes, BytesRejection>) -> Response {
    let req: CheckRequest = match decode(body) {
        Ok(r) => r,
        Err((status, msg)) => return error(status, msg),
    };
    let report = state.engine.check_source(&req.text);
    json(StatusCode::OK, CheckResponse::from_report(&report, req.verbosity).to_json())
}

async fn predict(State(state): State<Arc<AppState>>, body: Result<Bytes, BytesRejection>) -> Response {
    let req: PredictRequest = match decode(body) {
        Ok(r) => r,
        Err((status, msg)) => return error(status, msg),
    };
    let report = state.engine.check_source(&req.text);
    json(StatusCode::OK, to_json(&PredictResponse::compare(&report, &req)))
}

#[derive(Serialize)]
struct ExerciseList<'a> {
    schema: &'static str,
    exercises: &'a [Exercise],
}

#[derive(Serialize)]
struct ExerciseView<'a> {
    schema: &'static str,
    exercise: &'a Exercise,
}

async fn list_exercises(State(state): State<Arc<AppState>>) -> Response {
    let list = ExerciseList { schema: SCHEMA_VERSION, exercises: &state.bank.exercises };
    json(StatusCode::OK, to_json(&list))
}

async fn exercise(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    match state.bank.get(&id) {
        Some(ex) => json(StatusCode::OK, to_json(&ExerciseView { schema: SCHEMA_VERSION, exercise: ex })),
        None => error(StatusCode::NOT_FOUND, format!("no exercise '{id}'")),
    }
}
