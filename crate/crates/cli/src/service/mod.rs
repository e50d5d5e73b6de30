//! HTTP grading service backing the browser workbench.

mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use serde_json::json;
use stream_audit::agreement::{AlphaMetric, KappaWeighting};
use stream_audit::error::{JudgmentError, SessionError};
use stream_audit::grading::{apply_judgments, parse_session, serialize_session, GraderSession, NewJudgment, ScoringConfig, DEFAULT_FULL_CREDIT_THRESHOLD};
use stream_audit::render::{export_scorecard, render_svg, Theme};
use stream_audit::report::{report_digest, ParsedReport};
use stream_audit::rubric::rubric_to_json;
use stream_audit::Rubric;

pub use store::{valid_id, SessionLink, Store};

use crate::workflow::{self, to_document, WorkflowError};

pub struct AppState {
    pub store: Store,
    pub rubric: Rubric,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, message)
    }

    fn not_found(what: &str, id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, format!("unknown {what} `{id}`"))
    }
}

impl From<std::io::Error> for ApiError {
    fn from(e: std::io::Error) -> Self {
        tracing::error!(error = %e, "storage failure");
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "storage failure")
    }
}

fn judgment_status(e: &JudgmentError) -> StatusCode {
    match e {
        JudgmentError::NotApplicable { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        _ => StatusCode::BAD_REQUEST,
    }
}

impl From<WorkflowError> for ApiError {
    fn from(e: WorkflowError) -> Self {
        let status = match &e {
            WorkflowError::Judgment { source, .. } | WorkflowError::Session(SessionError::Judgment(source)) => judgment_status(source),
            WorkflowError::Assess(_) => StatusCode::INTERNAL_SERVER_ERROR,
            WorkflowError::Agreement(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = to_document(&json!({ "error": self.message }));
        body.truncate(body.len() - 1);
        (self.status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;
type Shared = State<Arc<AppState>>;

fn json_doc(status: StatusCode, text: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], text).into_response()
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/rubric", get(get_rubric))
        .route("/api/reports", post(post_report))
        .route("/api/reports/{id}/assessment", get(get_assessment))
        .route("/api/reports/{id}/scorecard", get(get_scorecard))
        .route("/api/reports/{id}/scorecard.svg", get(get_scorecard_svg))
        .route("/api/reports/{id}/agreement", get(get_agreement))
        .route("/api/sessions", post(post_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/judgments", post(post_judgments))
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, data_dir: PathBuf, rubric: Rubric) -> std::io::Result<()> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .try_init();
    let store = Store::open(&data_dir).await?;
    let app = router(Arc::new(AppState { store, rubric }));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, data_dir = %data_dir.display(), "serving");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

async fn get_rubric(State(app): Shared) -> Response {
    json_doc(StatusCode::OK, rubric_to_json(&app.rubric))
}

async fn load_report(app: &AppState, id: &str) -> ApiResult<ParsedReport> {
    let text = app.store.report(id).await?.ok_or_else(|| ApiError::not_found("report", id))?;
    // Stored reports parsed when uploaded, so a failure here means the file was damaged.
    workflow::load_report(&text).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

async fn load_session(app: &AppState, id: &str) -> ApiResult<GraderSession> {
    let text = app.store.session(id).await?.ok_or_else(|| ApiError::not_found("session", id))?;
    parse_session(&text).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

async fn post_report(State(app): Shared, body: Bytes) -> ApiResult<Response> {
    let text = std::str::from_utf8(&body).map_err(|_| ApiError::bad_request("report is not UTF-8"))?;
    let parsed = workflow::load_report(text).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    app.store.put_report(&id, text).await?;
    tracing::info!(%id, "report uploaded");
    let body = json!({
        "id": id,
        "report_digest": report_digest(&parsed.report),
        "warnings": parsed.warnings,
    });
    Ok(json_doc(StatusCode::CREATED, to_document(&body)))
}

async fn get_assessment(State(app): Shared, Path(id): Path<String>) -> ApiResult<Response> {
    let parsed = load_report(&app, &id).await?;
    let assessment = workflow::assess_with_sessions(&parsed, &[], &app.rubric)?;
    Ok(json_doc(StatusCode::OK, to_document(&assessment)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewSession {
    report_id: String,
    grader: String,
}

async fn post_session(State(app): Shared, body: Bytes) -> ApiResult<Response> {
    let req: NewSession = serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    if req.grader.trim().is_empty() {
        return Err(ApiError::bad_request("grader must not be empty"));
    }
    let parsed = load_report(&app, &req.report_id).await?;
    let session = GraderSession::new(&req.grader, &report_digest(&parsed.report), &app.rubric.version, &now());
    let id = uuid::Uuid::new_v4().simple().to_string();
    app.store.put_link(&id, &SessionLink { report_id: req.report_id.clone() }).await?;
    app.store.put_session(&id, &serialize_session(&session)).await?;
    let body = json!({ "id": id, "report_id": req.report_id, "session": session });
    Ok(json_doc(StatusCode::CREATED, to_document(&body)))
}

async fn get_session(State(app): Shared, Path(id): Path<String>) -> ApiResult<Response> {
    let text = app.store.session(&id).await?.ok_or_else(|| ApiError::not_found("session", &id))?;
    Ok(json_doc(StatusCode::OK, text))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JudgmentBatch {
    /// Sequence number of the last judgment the client has seen.
    base_seq: u64,
    judgments: Vec<NewJudgment>,
}

async fn post_judgments(State(app): Shared, Path(id): Path<String>, body: Bytes) -> ApiResult<Response> {
    let batch: JudgmentBatch = serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let link = app.store.link(&id).await?.ok_or_else(|| ApiError::not_found("session", &id))?;
    let lock = app.store.session_lock(&id);
    let _guard = lock.lock().await;

    let mut session = load_session(&app, &id).await?;
    session.append(batch.base_seq, batch.judgments, &now()).map_err(|e| match e {
        SessionError::StaleSequence { .. } => ApiError::new(StatusCode::CONFLICT, e.to_string()),
        other => ApiError::bad_request(other.to_string()),
    })?;
    // The whole batch must apply cleanly before anything is written.
    let parsed = load_report(&app, &link.report_id).await?;
    let base = workflow::assess_with_sessions(&parsed, &[], &app.rubric)?;
    apply_judgments(&base, &session, &app.rubric).map_err(|e| ApiError::new(judgment_status(&e), e.to_string()))?;

    let text = serialize_session(&session);
    app.store.put_session(&id, &text).await?;
    Ok(json_doc(StatusCode::OK, text))
}

#[derive(Deserialize)]
struct ScorecardQuery {
    /// Comma-separated session ids, applied in order.
    #[serde(default)]
    sessions: Option<String>,
    #[serde(default)]
    threshold: Option<f64>,
}

fn session_ids(list: Option<&str>) -> Vec<String> {
    list.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

async fn report_sessions(app: &AppState, report_id: &str, ids: &[String]) -> ApiResult<Vec<GraderSession>> {
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let link = app.store.link(id).await?.ok_or_else(|| ApiError::not_found("session", id))?;
        if link.report_id != report_id {
            return Err(ApiError::bad_request(format!("session `{id}` grades report `{}`", link.report_id)));
        }
        out.push(load_session(app, id).await?);
    }
    Ok(out)
}

async fn live_scorecard(app: &AppState, id: &str, q: &ScorecardQuery) -> ApiResult<stream_audit::grading::Scorecard> {
    let threshold = q.threshold.unwrap_or(DEFAULT_FULL_CREDIT_THRESHOLD);
    if !(0.0..=1.0).contains(&threshold) {
        return Err(ApiError::bad_request(format!("threshold {threshold} is outside 0..1")));
    }
    let parsed = load_report(app, id).await?;
    let ids = session_ids(q.sessions.as_deref());
    let sessions = report_sessions(app, id, &ids).await?;
    let config = ScoringConfig { full_credit_threshold: threshold, allow_pending: true };
    Ok(workflow::scorecard(&parsed, &sessions, &app.rubric, &config)?)
}

async fn get_scorecard(State(app): Shared, Path(id): Path<String>, Query(q): Query<ScorecardQuery>) -> ApiResult<Response> {
    let card = live_scorecard(&app, &id, &q).await?;
    let text = export_scorecard(&card);
    let ids = session_ids(q.sessions.as_deref());
    let name = if ids.is_empty() { id.clone() } else { format!("{id}--{}", ids.join("+")) };
    app.store.put_scorecard(&name, &text).await?;
    Ok(json_doc(StatusCode::OK, text))
}

async fn get_scorecard_svg(State(app): Shared, Path(id): Path<String>, Query(q): Query<ScorecardQuery>) -> ApiResult<Response> {
    let card = live_scorecard(&app, &id, &q).await?;
    Ok((StatusCode::OK, [(header::CONTENT_TYPE, "image/svg+xml")], render_svg(&card, &Theme::default())).into_response())
}

#[derive(Deserialize)]
struct AgreementQuery {
    sessions: Option<String>,
    #[serde(default)]
    weighting: Option<KappaWeighting>,
    #[serde(default)]
    metric: Option<AlphaMetric>,
}

async fn get_agreement(State(app): Shared, Path(id): Path<String>, Query(q): Query<AgreementQuery>) -> ApiResult<Response> {
    let ids = session_ids(q.sessions.as_deref());
    if ids.len() < 2 {
        return Err(ApiError::bad_request("agreement needs at least two completed sessions"));
    }
    let parsed = load_report(&app, &id).await?;
    let sessions = report_sessions(&app, &id, &ids).await?;
    let doc = workflow::agreement(
        &parsed,
        &sessions,
        &app.rubric,
        q.weighting.unwrap_or(KappaWeighting::Quadratic),
        q.metric.unwrap_or(AlphaMetric::Interval),
    )?;
    Ok(json_doc(StatusCode::OK, to_document(&doc)))
}
