use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use cnlcheck_cli::bank::Bank;
use cnlcheck_cli::service::{router, AppState, MAX_BODY};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn app() -> Router {
    let bank = Bank::load(&corpus("bank.toml")).unwrap();
    router(AppState { bank, ..AppState::default() })
}

async fn send(req: Request<Body>) -> (StatusCode, String) {
    let resp = app().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn post(uri: &str, body: impl Into<Body>) -> Request<Body> {
    Request::post(uri).header("content-type", "application/json").body(body.into()).unwrap()
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

fn check_body(text: &str) -> String {
    serde_json::json!({ "text": text }).to_string()
}

#[tokio::test]
async fn check_accepts_a_correct_proof() {
    let text = std::fs::read_to_string(corpus("text1.txt")).unwrap();
    let (status, body) = send(post("/api/check", check_body(&text))).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["status"], "accepted");
    assert_eq!(v["items"].as_array().unwrap().len(), 0);
}

#[tokio::test]
async fn unparsable_text_is_still_a_check() {
    let (status, body) = send(post("/api/check", check_body("Blah blah. Proof: qed."))).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["status"], "rejected");
    assert_eq!(v["items"][0]["code"], "i");
}

#[tokio::test]
async fn bad_requests() {
    let (status, body) = send(post("/api/check", "{\"text\": ")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["schema"], "1");

    let (status, _) = send(post("/api/check", "{\"txt\": \"x\"}")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, _) = send(post("/api/check", vec![b'"', 0xff, 0xfe, b'"'])).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let huge = check_body(&"x".repeat(MAX_BODY));
    let (status, _) = send(post("/api/check", huge)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, _) = send(post("/api/check", check_body(&"x".repeat(MAX_BODY - 100)))).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn exercises() {
    let (status, body) = send(get("/api/exercises")).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["exercises"].as_array().unwrap().len(), 3);

    let (status, body) = send(get("/api/exercises/chain-repair")).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["exercise"]["mode"], "fix-the-proof");

    let (status, body) = send(get("/api/exercises/nope")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(serde_json::from_str::<Value>(&body).unwrap()["error"].as_str().unwrap().contains("nope"));
}

#[tokio::test]
async fn empty_bank_lists_nothing() {
    let resp = router(AppState::default()).oneshot(get("/api/exercises")).await.unwrap();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    assert!(v["exercises"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn predictions_are_scored() {
    let text = std::fs::read_to_string(corpus("mutations/prop-chain-denying-antecedent.txt")).unwrap();
    // Sentences 5 to 8 are the body: a fact, the bad step, the conclusion, qed.
    let req = serde_json::json!({ "text": text, "predictions": { "5": "ok", "6": "ok", "7": "ok" } });
    let (status, body) = send(post("/api/predict-check", req.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["total"], 4);
    assert_eq!(v["correct"], 2);
    assert_eq!(v["sentences"][1]["actual"], "iii");
}
