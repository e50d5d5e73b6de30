mod common;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use common::{batch, pending_items, session, GOLD};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use stream_audit::grading::{auto_assess, parse_session, serialize_session, GraderSession};
use stream_audit::report::parse_report;
use stream_audit::Rubric;
use stream_audit_cli::service::{router, AppState, Store};
use stream_audit_cli::workflow::to_document;
use tempfile::TempDir;
use tower::ServiceExt;

async fn app() -> (Router, TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).await.unwrap();
    let state = Arc::new(AppState { store, rubric: Rubric::builtin().clone() });
    (router(state), dir)
}

struct Reply {
    status: StatusCode,
    content_type: String,
    body: String,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_str(&self.body).unwrap_or_else(|e| panic!("{e}: {}", self.body))
    }
}

async fn call(app: &Router, method: &str, uri: &str, body: impl Into<String>) -> Reply {
    let req = Request::builder().method(method).uri(uri).body(Body::from(body.into())).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let content_type = resp.headers().get("content-type").map(|v| v.to_str().unwrap().to_string()).unwrap_or_default();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply { status, content_type, body: String::from_utf8(bytes.to_vec()).unwrap() }
}

async fn upload(app: &Router) -> String {
    let r = call(app, "POST", "/api/reports", GOLD).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.body);
    r.json()["id"].as_str().unwrap().to_string()
}

async fn new_session(app: &Router, report: &str, grader: &str) -> String {
    let r = call(app, "POST", "/api/sessions", json!({ "report_id": report, "grader": grader }).to_string()).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.body);
    r.json()["id"].as_str().unwrap().to_string()
}

async fn judge(app: &Router, session: &str, base_seq: u64, judgments: Value) -> Reply {
    let body = json!({ "base_seq": base_seq, "judgments": judgments });
    call(app, "POST", &format!("/api/sessions/{session}/judgments"), body.to_string()).await
}

#[tokio::test]
async fn rubric_endpoint_serves_the_active_rubric() {
    let (app, _dir) = app().await;
    let r = call(&app, "GET", "/api/rubric", "").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.content_type, "application/json");
    assert_eq!(r.json()["schema"], "stream-rubric/v1");
    assert_eq!(r.body, stream_audit::rubric::rubric_to_json(Rubric::builtin()));
}

#[tokio::test]
async fn uploaded_report_assessment_matches_auto_assess() {
    let (app, dir) = app().await;
    let id = upload(&app).await;
    let r = call(&app, "GET", &format!("/api/reports/{id}/assessment"), "").await;
    assert_eq!(r.status, StatusCode::OK);
    let want = auto_assess(&parse_report(GOLD).unwrap().report, Rubric::builtin()).unwrap();
    assert_eq!(r.body, to_document(&want));
    // The stored report is the upload, byte for byte.
    let stored = std::fs::read_to_string(dir.path().join("reports").join(format!("{id}.json"))).unwrap();
    assert_eq!(stored, GOLD);
}

#[tokio::test]
async fn malformed_and_unknown_reports() {
    let (app, _dir) = app().await;
    assert_eq!(call(&app, "POST", "/api/reports", "{not json").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(call(&app, "POST", "/api/reports", r#"{"schema":"stream-report/v9"}"#).await.status, StatusCode::BAD_REQUEST);
    assert_eq!(call(&app, "GET", "/api/reports/0123abc/assessment", "").await.status, StatusCode::NOT_FOUND);
    assert_eq!(call(&app, "GET", "/api/reports/..%2Fsessions/assessment", "").await.status, StatusCode::NOT_FOUND);
    assert_eq!(call(&app, "GET", "/api/sessions/nope", "").await.status, StatusCode::NOT_FOUND);
    let r = call(&app, "POST", "/api/sessions", json!({ "report_id": "missing", "grader": "a" }).to_string()).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
    assert_eq!(r.json()["error"], "unknown report `missing`");
    assert_eq!(call(&app, "POST", "/api/sessions", "[]").await.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn session_journal_and_stale_sequence() {
    let (app, _dir) = app().await;
    let report = upload(&app).await;
    let s = new_session(&app, &report, "alice").await;
    let fresh = call(&app, "GET", &format!("/api/sessions/{s}"), "").await;
    let doc = parse_session(&fresh.body).unwrap();
    assert_eq!(doc.grader, "alice");
    assert!(doc.judgments.is_empty());

    let one = json!([{ "requirement": "1(i)D", "scope": "evaluation-1", "verdict": "met" }]);
    let r = judge(&app, &s, 0, one.clone()).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    assert_eq!(parse_session(&r.body).unwrap().last_seq(), 1);

    let stale = judge(&app, &s, 0, one).await;
    assert_eq!(stale.status, StatusCode::CONFLICT);
    assert!(stale.json()["error"].as_str().unwrap().contains("stale sequence"));
    let after = parse_session(&call(&app, "GET", &format!("/api/sessions/{s}"), "").await.body).unwrap();
    assert_eq!(after.judgments.len(), 1);
}

#[tokio::test]
async fn judgment_on_inapplicable_requirement_is_422() {
    let (app, _dir) = app().await;
    let report = upload(&app).await;
    let s = new_session(&app, &report, "alice").await;
    // evaluation-2 is graded against an answer key, so no human-grading criteria apply.
    let r = judge(&app, &s, 0, json!([{ "requirement": "2(iv-a)A", "scope": "evaluation-2", "verdict": "met" }])).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY, "{}", r.body);
}

#[tokio::test]
async fn invalid_batches_are_rejected_whole() {
    let (app, _dir) = app().await;
    let report = upload(&app).await;
    let s = new_session(&app, &report, "alice").await;
    let cases = [
        json!({ "base_seq": 0, "judgments": [{ "requirement": "1(i)D", "scope": "evaluation-1", "verdict": "maybe" }] }).to_string(),
        json!({ "judgments": [] }).to_string(),
        "not json".to_string(),
    ];
    for body in cases {
        let r = call(&app, "POST", &format!("/api/sessions/{s}/judgments"), body).await;
        assert_eq!(r.status, StatusCode::BAD_REQUEST, "{}", r.body);
    }
    // A good judgment next to one that needs an override: nothing is written.
    let mixed = json!([
        { "requirement": "1(i)D", "scope": "evaluation-1", "verdict": "met" },
        { "requirement": "1(i)A", "scope": "evaluation-1", "verdict": "unmet" },
    ]);
    let r = judge(&app, &s, 0, mixed).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST, "{}", r.body);
    assert!(r.json()["error"].as_str().unwrap().contains("override"));
    let after = parse_session(&call(&app, "GET", &format!("/api/sessions/{s}"), "").await.body).unwrap();
    assert!(after.judgments.is_empty());

    let na = json!([{ "requirement": "1(i)D", "scope": "evaluation-1", "verdict": "not_applicable" }]);
    assert_eq!(judge(&app, &s, 0, na).await.status, StatusCode::BAD_REQUEST);
    let overridden = json!([{ "requirement": "1(i)A", "scope": "evaluation-1", "verdict": "unmet", "override": true, "comment": "item is a paraphrase" }]);
    assert_eq!(judge(&app, &s, 0, overridden).await.status, StatusCode::OK);
}

#[tokio::test]
async fn concurrent_posts_on_one_session_serialize() {
    let (app, _dir) = app().await;
    let report = upload(&app).await;
    let s = new_session(&app, &report, "alice").await;
    let items = pending_items();
    let mut tasks = Vec::new();
    for (scope, requirement) in items.into_iter().take(12) {
        let app = app.clone();
        let s = s.clone();
        tasks.push(tokio::spawn(async move {
            judge(&app, &s, 0, json!([{ "requirement": requirement, "scope": scope, "verdict": "met" }])).await.status
        }));
    }
    let mut statuses = Vec::new();
    for t in tasks {
        statuses.push(t.await.unwrap());
    }
    assert_eq!(statuses.iter().filter(|s| **s == StatusCode::OK).count(), 1, "{statuses:?}");
    assert!(statuses.iter().all(|s| *s == StatusCode::OK || *s == StatusCode::CONFLICT));
    let after = parse_session(&call(&app, "GET", &format!("/api/sessions/{s}"), "").await.body).unwrap();
    assert_eq!(after.last_seq(), 1);
}

async fn complete(app: &Router, report: &str, grader: &str, unmet: &[&str]) -> String {
    let s = new_session(app, report, grader).await;
    let r = judge(app, &s, 0, serde_json::to_value(batch(unmet)).unwrap()).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    s
}

#[tokio::test]
async fn live_scorecard_is_provisional_until_complete() {
    let (app, dir) = app().await;
    let report = upload(&app).await;
    let r = call(&app, "GET", &format!("/api/reports/{report}/scorecard"), "").await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let v = r.json();
    assert_eq!(v["provisional"], true);
    assert_eq!(v["pending"], pending_items().len());

    let s = complete(&app, &report, "alice", &[]).await;
    let r = call(&app, "GET", &format!("/api/reports/{report}/scorecard?sessions={s}"), "").await;
    let v = r.json();
    assert_eq!(v["provisional"], false);
    assert_eq!(v["normalized"], 1.0);
    let saved = std::fs::read_to_string(dir.path().join("scorecards").join(format!("{report}--{s}.json"))).unwrap();
    assert_eq!(saved, r.body);

    let svg = call(&app, "GET", &format!("/api/reports/{report}/scorecard.svg?sessions={s}"), "").await;
    assert_eq!(svg.status, StatusCode::OK);
    assert_eq!(svg.content_type, "image/svg+xml");
    assert!(svg.body.contains(">100.0%</text>"));

    let bad = call(&app, "GET", &format!("/api/reports/{report}/scorecard?threshold=2"), "").await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
    let missing = call(&app, "GET", &format!("/api/reports/{report}/scorecard?sessions=ghost"), "").await;
    assert_eq!(missing.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn sessions_from_another_report_are_refused() {
    let (app, _dir) = app().await;
    let a = upload(&app).await;
    let b = upload(&app).await;
    let s = new_session(&app, &a, "alice").await;
    let r = call(&app, "GET", &format!("/api/reports/{b}/scorecard?sessions={s}"), "").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn agreement_endpoint() {
    let (app, _dir) = app().await;
    let report = upload(&app).await;
    let a = complete(&app, &report, "alice", &[]).await;
    let r = call(&app, "GET", &format!("/api/reports/{report}/agreement?sessions={a}"), "").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert!(r.json()["error"].as_str().unwrap().contains("at least two"));

    // Identical complete sessions: no variation, so the digest takes over.
    let b = complete(&app, &report, "bob", &[]).await;
    let r = call(&app, "GET", &format!("/api/reports/{report}/agreement?sessions={a},{b}"), "").await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let v = r.json();
    assert_eq!(v["schema"], "stream-agreement/v1");
    assert_eq!(v["raters"], json!(["alice", "bob"]));
    assert_eq!(v["digest"]["header"], stream_audit::agreement::UNSUITABLE_HEADER);

    // One grader finds the example item missing in both evaluations.
    let c = complete(&app, &report, "carol", &["1(i)D"]).await;
    let r = call(&app, "GET", &format!("/api/reports/{report}/agreement?sessions={a},{c}&weighting=linear&metric=ordinal"), "").await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let v = r.json();
    let kappa = v["statistics"].as_array().unwrap().iter().find(|s| s["statistic"] == "cohen_kappa").unwrap();
    assert_eq!(kappa["variant"], "linear");
    let top = &v["digest"]["entries"][0];
    assert!(top["item"].as_str().unwrap().ends_with("/1(i)"), "{top}");

    let r = call(&app, "GET", &format!("/api/reports/{report}/agreement?sessions={a},{c}&metric=cosine"), "").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn api_and_cli_scorecard_exports_are_byte_identical() {
    let (app, dir) = app().await;
    let report = upload(&app).await;
    let s = complete(&app, &report, "alice", &["3(ii)E"]).await;
    let api = call(&app, "GET", &format!("/api/reports/{report}/scorecard?sessions={s}"), "").await;
    assert_eq!(api.status, StatusCode::OK);

    // The session file downloaded from the service, applied through the CLI.
    let session_text = call(&app, "GET", &format!("/api/sessions/{s}"), "").await.body;
    let report_path = dir.path().join("report.json");
    let session_path = dir.path().join("alice.json");
    std::fs::write(&report_path, GOLD).unwrap();
    std::fs::write(&session_path, &session_text).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let args = ["stream-audit", "score", report_path.to_str().unwrap(), "--sessions", session_path.to_str().unwrap()];
    let code = stream_audit_cli::cli::run(args, &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    assert_eq!(String::from_utf8(out).unwrap(), api.body);

    // And a session built offline yields the same card as one posted online.
    let offline: GraderSession = session("alice", &["3(ii)E"]);
    std::fs::write(&session_path, serialize_session(&offline)).unwrap();
    let mut out = Vec::new();
    assert_eq!(stream_audit_cli::cli::run(args, &mut out, &mut Vec::new()), 0);
    assert_eq!(String::from_utf8(out).unwrap(), api.body);
}
