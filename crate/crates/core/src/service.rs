//! HTTP+JSON assessment sessions.
//!
//! A session collects responses one criterion at a time and answers with a
//! running total; once complete it returns the same JSON report as the CLI's
//! `score --format json`. Sessions can also run in two-rater mode, where
//! each rater's answers are reconciled server-side and polar conflicts must
//! be settled with a direct (agreed) response before a result is released.
//!
//! Routes:
//!
//! | method | path | |
//! |---|---|---|
//! | GET | `/rubric` | default rubric |
//! | POST | `/sessions` | `{rubric?, task_id?, task_name?, two_rater?}` |
//! | GET | `/sessions/{id}` | session snapshot |
//! | PUT | `/sessions/{id}/responses/{criterion}` | `{value, rater?}` |
//! | GET | `/sessions/{id}/result` | report, missing list, or 409 conflicts |
//! | POST | `/sessions/{id}/whatif` | `{criterion, value}` |
//! | DELETE | `/sessions/{id}` | |

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

use crate::engine::{
    provisional_score, score_assessment, sensitivity, what_if, ProvisionalScore, ScoreError,
};
use crate::model::{Assessment, Conflict, HalfPoints, RaterSheet, Rubric, ScoringPolicy};
use crate::reconcile::reconcile;
use crate::report::{render_report, ReportFormat};
use crate::response::{parse_response, ResponseLevel};

/// Error body: `{error_kind, message, detail?}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
    detail: Option<Value>,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            kind,
            message: message.into(),
            detail: None,
        }
    }

    fn with_detail(mut self, detail: Value) -> ApiError {
        self.detail = Some(detail);
        self
    }

    fn session_not_found(id: &str) -> ApiError {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "unknown_session",
            format!("no session `{id}`"),
        )
    }

    fn criterion_not_found(id: &str) -> ApiError {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "unknown_criterion",
            format!("no criterion `{id}`"),
        )
    }

    fn conflicts(conflicts: &[Conflict]) -> ApiError {
        ApiError::new(
            StatusCode::CONFLICT,
            "unresolved_conflicts",
            format!(
                "{} polar rater conflict(s) need an agreed response",
                conflicts.len()
            ),
        )
        .with_detail(json!({ "conflicts": conflicts }))
    }

    fn bad_body(err: impl std::fmt::Display) -> ApiError {
        ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "invalid_body",
            err.to_string(),
        )
    }
}

impl From<ScoreError> for ApiError {
    fn from(err: ScoreError) -> ApiError {
        let message = err.to_string();
        match err {
            ScoreError::Incomplete { missing } => {
                ApiError::new(StatusCode::CONFLICT, "incomplete", message)
                    .with_detail(json!({ "missing": missing }))
            }
            ScoreError::UnresolvedConflicts(conflicts) => ApiError::conflicts(&conflicts),
            ScoreError::UnknownCriterion(id) => ApiError::criterion_not_found(&id),
            ScoreError::NonAtomicSubstitution(_) => ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "non_atomic_response",
                message,
            ),
            ScoreError::InvalidResponse { .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "scale_mismatch", message)
            }
            ScoreError::MissingPoints { .. } | ScoreError::InexactMixed { .. } => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "invalid_rubric", message)
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error_kind": self.kind, "message": self.message });
        if let Some(detail) = self.detail {
            body["detail"] = detail;
        }
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// One assessment in progress.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    pub rubric_id: String,
    pub task_id: String,
    pub task_name: String,
    /// Direct responses. In two-rater mode these are the agreed answers that
    /// take precedence over the reconciled rater sheets.
    pub responses: IndexMap<String, ResponseLevel>,
    #[serde(default)]
    pub two_rater: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub raters: Vec<RaterSheet>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

impl Session {
    /// Effective assessment: reconciled rater answers overlaid with direct
    /// responses. Conflicts settled by a direct response are dropped.
    pub fn assessment(&self, rubric: &Rubric) -> Assessment {
        let mut assessment = Assessment::new(&self.task_id, &self.task_name);
        if let [a, b] = self.raters.as_slice() {
            let common = |sheet: &RaterSheet, other: &RaterSheet| {
                let mut s = sheet.clone();
                s.responses.retain(|k, _| other.responses.contains_key(k));
                s
            };
            if let Ok(outcome) = reconcile(&common(a, b), &common(b, a), rubric) {
                assessment.responses = outcome.consensus;
                assessment.conflicts = outcome.conflicts;
            }
        }
        for (id, level) in &self.responses {
            assessment.responses.insert(id.clone(), *level);
        }
        assessment
            .conflicts
            .retain(|c| !self.responses.contains_key(&c.criterion_id));
        let order = |id: &String| rubric.position(id).unwrap_or(usize::MAX);
        assessment
            .responses
            .sort_by(|k1, _, k2, _| order(k1).cmp(&order(k2)));
        assessment
    }
}

/// Live view returned after each submission.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionStatus {
    #[serde(flatten)]
    pub score: ProvisionalScore,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conflicts: Vec<Conflict>,
}

#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: Mutex<HashMap<String, Session>>,
}

impl SessionStore {
    pub fn from_sessions(sessions: impl IntoIterator<Item = Session>) -> SessionStore {
        let map = sessions
            .into_iter()
            .map(|s| (s.session_id.clone(), s))
            .collect();
        SessionStore {
            sessions: Mutex::new(map),
        }
    }

    /// All sessions, oldest first.
    pub fn snapshot(&self) -> Vec<Session> {
        let mut all: Vec<Session> = self.lock().values().cloned().collect();
        all.sort_by(|a, b| {
            a.created_at
                .cmp(&b.created_at)
                .then(a.session_id.cmp(&b.session_id))
        });
        all
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<String, Session>> {
        self.sessions
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }
}

/// Shared service state: known rubrics and the session store.
#[derive(Debug, Clone)]
pub struct AppState {
    rubrics: Arc<HashMap<String, Arc<Rubric>>>,
    default_rubric: String,
    store: Arc<SessionStore>,
}

impl AppState {
    pub fn new(default_rubric: Rubric) -> AppState {
        let id = default_rubric.id.clone();
        AppState {
            rubrics: Arc::new(HashMap::from([(id.clone(), Arc::new(default_rubric))])),
            default_rubric: id,
            store: Arc::new(SessionStore::default()),
        }
    }

    /// Registers an additional rubric, selectable by id at session creation.
    pub fn with_rubric(mut self, rubric: Rubric) -> AppState {
        Arc::make_mut(&mut self.rubrics).insert(rubric.id.clone(), Arc::new(rubric));
        self
    }

    pub fn with_store(mut self, store: SessionStore) -> AppState {
        self.store = Arc::new(store);
        self
    }

    pub fn store(&self) -> &SessionStore {
        &self.store
    }

    fn rubric(&self, id: &str) -> Option<&Arc<Rubric>> {
        self.rubrics.get(id)
    }

    fn session_rubric(&self, session: &Session) -> ApiResult<Arc<Rubric>> {
        self.rubric(&session.rubric_id).cloned().ok_or_else(|| {
            ApiError::new(
                StatusCode::NOT_FOUND,
                "unknown_rubric",
                format!("no rubric `{}`", session.rubric_id),
            )
        })
    }
}

fn policy(rubric: &Rubric) -> ScoringPolicy {
    rubric.default_policy()
}

fn parse_body<T: for<'de> Deserialize<'de> + Default>(body: &Bytes) -> ApiResult<T> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body).map_err(ApiError::bad_body)
}

fn json_text(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

async fn get_rubric(State(state): State<AppState>) -> Response {
    let rubric = state
        .rubric(&state.default_rubric)
        .expect("default rubric registered");
    json_text(StatusCode::OK, rubric.to_json())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateSession {
    rubric: Option<String>,
    task_id: Option<String>,
    task_name: Option<String>,
    #[serde(default)]
    two_rater: bool,
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let req: CreateSession = parse_body(&body)?;
    let rubric_id = req.rubric.unwrap_or_else(|| state.default_rubric.clone());
    if state.rubric(&rubric_id).is_none() {
        return Err(ApiError::new(
            StatusCode::NOT_FOUND,
            "unknown_rubric",
            format!("no rubric `{rubric_id}`"),
        ));
    }
    let session_id = uuid::Uuid::new_v4().simple().to_string();
    let now = Utc::now();
    let session = Session {
        task_id: req.task_id.unwrap_or_else(|| session_id.clone()),
        task_name: req.task_name.unwrap_or_default(),
        session_id: session_id.clone(),
        rubric_id,
        responses: IndexMap::new(),
        two_rater: req.two_rater,
        raters: Vec::new(),
        created_at: now,
        updated_at: now,
    };
    let body = json!({ "session_id": session_id, "rubric": session.rubric_id, "two_rater": session.two_rater });
    state.store.lock().insert(session_id, session);
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<Session>> {
    let sessions = state.store.lock();
    sessions
        .get(&id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::session_not_found(&id))
}

async fn delete_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<StatusCode> {
    match state.store.lock().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::session_not_found(&id)),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubmitResponse {
    value: String,
    rater: Option<String>,
}

fn status_of(session: &Session, rubric: &Rubric) -> ApiResult<SessionStatus> {
    let mut assessment = session.assessment(rubric);
    let conflicts = std::mem::take(&mut assessment.conflicts);
    let score = provisional_score(&assessment, rubric, &policy(rubric))?;
    Ok(SessionStatus { score, conflicts })
}

async fn submit_response(
    State(state): State<AppState>,
    Path((id, criterion_id)): Path<(String, String)>,
    body: Bytes,
) -> ApiResult<Json<SessionStatus>> {
    let req: SubmitResponse = serde_json::from_slice(&body).map_err(ApiError::bad_body)?;
    let mut sessions = state.store.lock();
    let session = sessions
        .get_mut(&id)
        .ok_or_else(|| ApiError::session_not_found(&id))?;
    let rubric = state.session_rubric(session)?;
    let criterion = rubric
        .criterion(&criterion_id)
        .ok_or_else(|| ApiError::criterion_not_found(&criterion_id))?;
    let level = parse_response(&req.value, criterion.scale).map_err(|e| {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.kind(), e.to_string())
            .with_detail(json!({ "token": req.value }))
    })?;

    match req.rater {
        None => {
            session.responses.insert(criterion_id, level);
        }
        Some(rater_id) => {
            if !session.two_rater {
                return Err(ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "not_two_rater",
                    "rater responses need a session created with two_rater: true",
                ));
            }
            if !level.is_atomic() {
                return Err(ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "mixed_from_rater",
                    "individual raters give atomic responses; mixed values come from reconciliation",
                ));
            }
            let sheet = match session
                .raters
                .iter_mut()
                .position(|s| s.rater_id == rater_id)
            {
                Some(i) => &mut session.raters[i],
                None if session.raters.len() < 2 => {
                    session.raters.push(RaterSheet::new(rater_id));
                    session.raters.last_mut().expect("just pushed")
                }
                None => {
                    return Err(ApiError::new(
                        StatusCode::UNPROCESSABLE_ENTITY,
                        "too_many_raters",
                        "a session reconciles exactly two raters",
                    ))
                }
            };
            sheet.responses.insert(criterion_id, level);
        }
    }
    session.updated_at = Utc::now();
    Ok(Json(status_of(session, &rubric)?))
}

/// Report body for a complete, conflict-free session: byte-identical to
/// `modeadvisor score --format json` on the same responses.
pub fn session_report(session: &Session, rubric: &Rubric) -> Result<String, ScoreError> {
    let assessment = session.assessment(rubric);
    let policy = policy(rubric);
    let breakdown = score_assessment(&assessment, rubric, &policy)?;
    let findings = sensitivity(&assessment, rubric, &policy)?;
    Ok(render_report(&breakdown, &findings, ReportFormat::Json).body)
}

#[derive(Serialize)]
struct IncompleteResult<'a> {
    complete: bool,
    answered_count: usize,
    provisional_total: HalfPoints,
    missing: &'a [String],
}

async fn get_result(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let sessions = state.store.lock();
    let session = sessions
        .get(&id)
        .ok_or_else(|| ApiError::session_not_found(&id))?;
    let rubric = state.session_rubric(session)?;
    let status = status_of(session, &rubric)?;
    if !status.conflicts.is_empty() {
        return Err(ApiError::conflicts(&status.conflicts));
    }
    if !status.score.complete {
        let body = IncompleteResult {
            complete: false,
            answered_count: status.score.answered_count,
            provisional_total: status.score.provisional_total,
            missing: &status.score.missing,
        };
        return Ok((StatusCode::OK, Json(body)).into_response());
    }
    Ok(json_text(StatusCode::OK, session_report(session, &rubric)?))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct WhatIfRequest {
    criterion: String,
    value: String,
}

async fn post_whatif(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let req: WhatIfRequest = serde_json::from_slice(&body).map_err(ApiError::bad_body)?;
    let sessions = state.store.lock();
    let session = sessions
        .get(&id)
        .ok_or_else(|| ApiError::session_not_found(&id))?;
    let rubric = state.session_rubric(session)?;
    let criterion = rubric
        .criterion(&req.criterion)
        .ok_or_else(|| ApiError::criterion_not_found(&req.criterion))?;
    let level = parse_response(&req.value, criterion.scale)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.kind(), e.to_string()))?;
    let assessment = session.assessment(&rubric);
    let result = what_if(&assessment, &rubric, &policy(&rubric), &criterion.id, level)?;
    Ok((StatusCode::OK, Json(result)).into_response())
}

/// Which browser origins may call the API.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum CorsOrigins {
    #[default]
    Any,
    List(Vec<String>),
}

fn cors_layer(origins: &CorsOrigins) -> CorsLayer {
    let allow = match origins {
        CorsOrigins::Any => AllowOrigin::any(),
        CorsOrigins::List(list) => {
            AllowOrigin::list(list.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
        }
    };
    CorsLayer::new()
        .allow_origin(allow)
        .allow_methods([Method::GET, Method::POST, Method::PUT, Method::DELETE])
        .allow_headers([header::CONTENT_TYPE])
}

/// Builds the API router. `static_dir`, when given, is served for every
/// path the API does not claim (the wizard bundle).
pub fn router(state: AppState, cors: &CorsOrigins, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/rubric", get(get_rubric))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route(
            "/sessions/{id}/responses/{criterion_id}",
            put(submit_response),
        )
        .route("/sessions/{id}/result", get(get_result))
        .route("/sessions/{id}/whatif", post(post_whatif))
        .with_state(state);
    let api = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    api.layer(cors_layer(cors))
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub addr: SocketAddr,
    pub rubric: Rubric,
    pub cors: CorsOrigins,
    /// Sessions are loaded from here on start and written back on shutdown.
    pub state_file: Option<PathBuf>,
    pub static_dir: Option<PathBuf>,
}

pub fn load_sessions(path: &std::path::Path) -> std::io::Result<Vec<Session>> {
    match std::fs::read_to_string(path) {
        Ok(text) => serde_json::from_str(&text).map_err(std::io::Error::other),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

pub fn save_sessions(path: &std::path::Path, sessions: &[Session]) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(sessions).map_err(std::io::Error::other)?;
    std::fs::write(path, text + "\n")
}

/// Runs the service until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let mut state = AppState::new(config.rubric.clone());
    if let Some(path) = &config.state_file {
        state = state.with_store(SessionStore::from_sessions(load_sessions(path)?));
    }
    let app = router(state.clone(), &config.cors, config.static_dir.clone());
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    eprintln!(
        "modeadvisor: listening on http://{}",
        listener.local_addr()?
    );
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(path) = &config.state_file {
        save_sessions(path, &state.store().snapshot())?;
    }
    Ok(())
}
