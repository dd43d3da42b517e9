//! HTTP facade over the proof engine: ontology projects, their entailments,
//! and cancellable proof jobs with progress.
//!
//! | method | path | body | answer |
//! |---|---|---|---|
//! | POST | `/projects` | ontology text | `{projectId, axiomCount, signature}` |
//! | GET | `/projects/{id}/entailments` | | printed atomic inclusions |
//! | POST | `/projects/{id}/proofs` | `{goal, method, knownSignature?, measure?}` | `{jobId}` |
//! | GET, DELETE | `/jobs/{id}` | | the job |
//!
//! Everything else is served from the static directory, if one is configured.

pub mod jobs;
pub mod projects;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use proofforge_core::dl::{parse_axiom, parse_unicode_axiom, Axiom};
use proofforge_core::methods::{known_signature, Method};
use proofforge_core::proof::Measure;
use serde::Deserialize;
use serde_json::json;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

pub use jobs::{JobConfig, JobState, JobTable, ProofJob};
pub use projects::{Project, ProjectError, ProjectStore};

pub const DEFAULT_PORT: u16 = 8321;

#[derive(Clone, Debug, Default)]
pub struct ServiceConfig {
    /// Where projects are stored; in memory only when `None`.
    pub data_dir: Option<PathBuf>,
    /// Built web client, served under `/`.
    pub static_dir: Option<PathBuf>,
    pub jobs: JobConfig,
}

impl ServiceConfig {
    /// Defaults, with `PROOFFORGE_DATA_DIR` and `PROOFFORGE_WEBUI_DIR` taken from the environment.
    pub fn from_env() -> Self {
        let data_dir = std::env::var_os("PROOFFORGE_DATA_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("proofforge-data"));
        let static_dir = std::env::var_os("PROOFFORGE_WEBUI_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("webui/dist"));
        let mut jobs = JobConfig::default();
        if let Some(secs) = std::env::var("PROOFFORGE_TIMEOUT_SECS").ok().and_then(|s| s.parse::<f64>().ok()) {
            jobs.per_name = std::time::Duration::from_secs_f64(secs);
        }
        ServiceConfig { data_dir: Some(data_dir), static_dir: Some(static_dir), jobs }
    }
}

#[derive(Clone)]
pub struct AppState {
    pub projects: Arc<ProjectStore>,
    pub jobs: JobTable,
}

impl AppState {
    pub fn new(cfg: &ServiceConfig) -> Self {
        AppState { projects: Arc::new(ProjectStore::new(cfg.data_dir.clone())), jobs: JobTable::new(&cfg.jobs) }
    }
}

struct ApiError(StatusCode, serde_json::Value);

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError(status, json!({ "error": message.into() }))
    }

    fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no {what} {id}"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/projects", post(create_project))
        .route("/projects/{id}/entailments", get(entailments))
        .route("/projects/{id}/proofs", post(create_proof))
        .route("/jobs/{id}", get(get_job).delete(cancel_job))
        .with_state(state);
    let app = match static_dir {
        Some(d) if d.is_dir() => api.fallback_service(ServeDir::new(d)),
        _ => api,
    };
    app.layer(CorsLayer::permissive())
}

/// Accepts the ontology as the raw body, or as `{"ontology": "..."}`.
fn ontology_text(body: String) -> String {
    match serde_json::from_str::<serde_json::Value>(&body) {
        Ok(serde_json::Value::Object(m)) => m.get("ontology").and_then(|v| v.as_str()).map(str::to_string).unwrap_or(body),
        _ => body,
    }
}

async fn create_project(State(st): State<AppState>, body: String) -> ApiResult<(StatusCode, Json<serde_json::Value>)> {
    let text = ontology_text(body);
    let p = st.projects.insert(&text).map_err(|e| match e {
        ProjectError::Empty => ApiError::new(StatusCode::BAD_REQUEST, "empty ontology text"),
        ProjectError::Parse(pe) => ApiError(
            StatusCode::BAD_REQUEST,
            json!({ "error": pe.to_string(), "line": pe.line, "column": pe.column, "expected": pe.expected, "found": pe.found }),
        ),
    })?;
    let sig = p.ontology.signature();
    Ok((
        StatusCode::CREATED,
        Json(json!({
            "projectId": p.id,
            "axiomCount": p.ontology.len(),
            "signature": { "concepts": sig.concepts, "roles": sig.roles },
        })),
    ))
}

async fn entailments(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Vec<String>>> {
    let p = st.projects.get(&id).ok_or_else(|| ApiError::not_found("project", &id))?;
    let out = tokio::task::spawn_blocking(move || p.entailments())
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    out.map(Json).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct ProofRequest {
    goal: String,
    method: String,
    #[serde(default)]
    known_signature: Vec<String>,
    measure: Option<String>,
}

fn unprocessable(msg: impl Into<String>) -> ApiError {
    ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, msg)
}

/// Goals are accepted in the file syntax or as printed in the entailment list.
fn parse_goal(text: &str, p: &Project) -> ApiResult<Axiom> {
    parse_axiom(text)
        .or_else(|e| parse_unicode_axiom(text, &p.ontology.signature().roles).map_err(|_| e))
        .map_err(|e| unprocessable(format!("malformed goal: {e}")))
}

async fn create_proof(
    State(st): State<AppState>,
    Path(id): Path<String>,
    body: axum::body::Bytes,
) -> ApiResult<(StatusCode, Json<serde_json::Value>)> {
    let p = st.projects.get(&id).ok_or_else(|| ApiError::not_found("project", &id))?;
    let req: ProofRequest = serde_json::from_slice(&body).map_err(|e| unprocessable(format!("malformed request: {e}")))?;
    let goal = parse_goal(&req.goal, &p)?;
    let method: Method = req.method.parse().map_err(unprocessable)?;
    let measure = req.measure.as_deref().map(str::parse::<Measure>).transpose().map_err(unprocessable)?;
    let known = known_signature(&p.ontology, &req.known_signature);
    let job = st.jobs.submit(jobs::JobRequest { project: p, goal, method, known, measure });
    Ok((StatusCode::ACCEPTED, Json(json!({ "jobId": job.id }))))
}

async fn get_job(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<ProofJob>> {
    st.jobs.get(&id).map(Json).ok_or_else(|| ApiError::not_found("job", &id))
}

async fn cancel_job(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<ProofJob>> {
    st.jobs.cancel(&id).map(Json).ok_or_else(|| ApiError::not_found("job", &id))
}

pub async fn serve(cfg: ServiceConfig, port: u16) -> std::io::Result<()> {
    let app = router(AppState::new(&cfg), cfg.static_dir.clone());
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app).await
}

/// Runs the service on a fresh runtime until it fails.
pub fn serve_blocking(cfg: ServiceConfig, port: u16) -> std::io::Result<()> {
    tokio::runtime::Builder::new_multi_thread().enable_all().build()?.block_on(serve(cfg, port))
}
