use std::path::PathBuf;
use std::process::Command;

use axum::body::Body;
use axum::http::Request;
use cnlcheck_cli::service::{router, AppState};
use http_body_util::BodyExt;
use tower::ServiceExt;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn cnlcheck(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cnlcheck")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

#[test]
fn exit_codes() {
    let (code, out, _) = cnlcheck(&["check", &path("text1.txt")]);
    assert_eq!(code, 0);
    assert_eq!(out, "accepted\n");

    let (code, out, _) = cnlcheck(&["check", &path("mutations/div8-freshman-binomial.txt")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("rejected\n"));
    assert!(out.contains("pattern: freshman-binomial"));

    let (code, _, err) = cnlcheck(&["check", &path("does-not-exist.txt")]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));
}

#[test]
fn terse_text_has_no_hints() {
    let (_, out, _) = cnlcheck(&["check", "--verbosity", "terse", &path("mutations/prop-chain-denying-antecedent.txt")]);
    assert!(!out.contains("hint:"));
    assert!(!out.contains("Consider:"));
}

#[tokio::test]
async fn cli_and_service_json_agree() {
    for name in ["text2.txt", "mutations/prop-chain-denying-antecedent.txt", "mutations/text1-nonsense-sentence.txt"] {
        for verbosity in ["terse", "explained"] {
            let (_, cli, _) = cnlcheck(&["check", "--format", "json", "--verbosity", verbosity, &path(name)]);
            let text = std::fs::read_to_string(corpus(name)).unwrap();
            let body = serde_json::json!({ "text": text, "verbosity": verbosity }).to_string();
            let req = Request::post("/api/check").body(Body::from(body)).unwrap();
            let resp = router(AppState::default()).oneshot(req).await.unwrap();
            let bytes = resp.into_body().collect().await.unwrap().to_bytes();
            assert_eq!(cli.as_bytes(), &bytes[..], "{name} {verbosity}");
        }
    }
}

#[test]
fn bank_validate() {
    let (code, out, _) = cnlcheck(&["bank", "validate", &path("bank.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("3 exercises"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        "[[exercise]]\nid = \"fine\"\ndomain = \"propositional\"\nmode = \"fix-the-proof\"\n\
         statement = \"Let P be a proposition. Assume that P. Prove: P.\"\n\
         attachment = \"Let P be a proposition. Assume that P. Prove: P. Proof: We have P. qed.\"\n",
    )
    .unwrap();
    let (code, _, err) = cnlcheck(&["bank", "validate", &bad.to_string_lossy()]);
    assert_eq!(code, 2);
    assert!(err.contains("'fine'"));
}
