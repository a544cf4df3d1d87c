//! Game sessions over JSON/HTTP.
//!
//! ```text
//! POST /api/sessions                 {"graph": "prism", "human_role": "painter", "engine": "exact", "hints": true, "k": 1}
//! GET  /api/sessions/{id}            snapshot
//! POST /api/sessions/{id}/moves      {"vertices": [0, 4]} or {"vertices": ["1", "5"]}
//! GET  /api/sessions/{id}/hint       optimal move and value to go
//! ```
//!
//! Engine moves are answered inline when the subgame is already in the
//! solver's memo or finishes within the configured budget; otherwise the
//! response has `"pending": true` and the client polls the snapshot.

pub mod session;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};
use std::time::Duration;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use slowcolor::strategy::{shared_solver, SharedSolver};
use slowcolor::verify::main_theorem_bound;
use slowcolor::{Graph, Instance, Role, SolveError, SolveOptions, VertexSet};
use thiserror::Error;
use tower_http::services::ServeDir;

use session::{Engine, SavedSession, Session, SessionConfig};

#[derive(Clone, Debug)]
pub struct Config {
    /// How long a request waits for a cold engine move before answering "pending".
    pub sync_budget: Duration,
    pub solve: SolveOptions,
    pub static_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { sync_budget: Duration::from_millis(250), solve: SolveOptions::default(), static_dir: None }
    }
}

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("{0}")]
    InvalidGraph(String),
    #[error("{0}")]
    IllegalMove(String),
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("session {0} is finished")]
    Finished(String),
    #[error("{0}")]
    CapExceeded(String),
    #[error("{0}")]
    Conflict(String),
    #[error("hints are disabled for this session")]
    HintsDisabled,
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            ApiError::InvalidGraph(_) | ApiError::IllegalMove(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ApiError::Finished(_) => StatusCode::GONE,
            ApiError::CapExceeded(_) | ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::HintsDisabled => StatusCode::FORBIDDEN,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            ApiError::InvalidGraph(_) => "invalid-graph",
            ApiError::IllegalMove(_) => "illegal-move",
            ApiError::UnknownSession(_) => "unknown-session",
            ApiError::Finished(_) => "finished",
            ApiError::CapExceeded(_) => "cap-exceeded",
            ApiError::Conflict(_) => "conflict",
            ApiError::HintsDisabled => "hints-disabled",
            ApiError::Internal(_) => "internal",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(json!({ "error": self.code(), "reason": self.to_string() }))).into_response()
    }
}

fn solve_error(e: SolveError) -> ApiError {
    match e {
        SolveError::CapExceeded { .. } => ApiError::CapExceeded(e.to_string()),
        other => ApiError::Internal(other.to_string()),
    }
}

type SessionRef = Arc<tokio::sync::Mutex<Session>>;

struct Inner {
    config: Config,
    sessions: RwLock<HashMap<String, SessionRef>>,
    /// One solver per graph content hash, shared by every session on it.
    solvers: Mutex<HashMap<String, SharedSolver>>,
}

#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn new(config: Config) -> AppState {
        AppState(Arc::new(Inner { config, sessions: RwLock::default(), solvers: Mutex::default() }))
    }

    fn solver_for(&self, g: &Graph) -> Result<SharedSolver, ApiError> {
        let mut solvers = self.0.solvers.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(s) = solvers.get(&g.content_hash()) {
            return Ok(Arc::clone(s));
        }
        let s = shared_solver(g, self.0.config.solve.clone()).map_err(solve_error)?;
        solvers.insert(g.content_hash(), Arc::clone(&s));
        Ok(s)
    }

    fn session(&self, id: &str) -> Result<SessionRef, ApiError> {
        let sessions = self.0.sessions.read().unwrap_or_else(|e| e.into_inner());
        sessions.get(id).cloned().ok_or_else(|| ApiError::UnknownSession(id.to_string()))
    }

    fn insert(&self, session: Session) -> SessionRef {
        let id = session.id.clone();
        let r = Arc::new(tokio::sync::Mutex::new(session));
        self.0.sessions.write().unwrap_or_else(|e| e.into_inner()).insert(id, Arc::clone(&r));
        r
    }

    fn build_session(&self, id: String, name: String, graph: Graph, config: SessionConfig) -> Result<Session, ApiError> {
        let solver = match (config.engine, config.hints) {
            (Engine::Greedy, false) => None,
            _ => Some(self.solver_for(&graph)?),
        };
        let bound = main_theorem_bound(&Instance::new(name.clone(), graph.clone()), config.k);
        Ok(Session::new(id, name, graph, config, bound, solver))
    }

    /// Every session, for the snapshot file.
    pub async fn save(&self) -> Value {
        let refs: Vec<SessionRef> =
            self.0.sessions.read().unwrap_or_else(|e| e.into_inner()).values().cloned().collect();
        let mut saved = Vec::new();
        for r in refs {
            saved.push(r.lock().await.save());
        }
        saved.sort_by(|a, b| a.id.cmp(&b.id));
        json!({ "version": 1, "sessions": saved })
    }

    /// Loads a snapshot written by [`AppState::save`]. Engine moves that were
    /// in flight are recomputed.
    pub fn restore(&self, snapshot: Value) -> Result<usize, String> {
        let saved: Vec<SavedSession> =
            serde_json::from_value(snapshot.get("sessions").cloned().unwrap_or(Value::Null)).map_err(|e| e.to_string())?;
        let count = saved.len();
        for s in saved {
            let needs_solver = s.config.engine == Engine::Exact || s.config.hints;
            let solver = if needs_solver { Some(self.solver_for(&s.graph).map_err(|e| e.to_string())?) } else { None };
            let bound = main_theorem_bound(&Instance::new(s.graph_name.clone(), s.graph.clone()), s.config.k);
            let mut session = Session::restore(s, bound, solver)?;
            if session.engine_to_move() {
                let outcome = session.engine_task().run().map_err(|e| e.to_string());
                session.finish_engine(outcome);
            }
            self.insert(session);
        }
        Ok(count)
    }
}

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/moves", post(post_move))
        .route("/api/sessions/{id}/hint", get(get_hint));
    let app = match &state.0.config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.with_state(state)
}

/// Runs the engine's move if it is the engine's turn. Cold computations
/// that outlast the budget finish in the background.
async fn advance(state: &AppState, session_ref: &SessionRef, session: &mut Session) -> Result<(), ApiError> {
    if !session.engine_to_move() {
        return Ok(());
    }
    let task = session.engine_task();
    let warm = task.is_warm();
    let mut job = tokio::task::spawn_blocking(move || task.run().map_err(|e| e.to_string()));
    let outcome = if warm {
        Some((&mut job).await)
    } else {
        tokio::time::timeout(state.0.config.sync_budget, &mut job).await.ok()
    };
    match outcome {
        Some(joined) => {
            let result = joined.map_err(|e| ApiError::Internal(format!("engine task: {e}")))?;
            session.finish_engine(result);
        }
        None => {
            session.thinking = true;
            let session_ref = Arc::clone(session_ref);
            tokio::spawn(async move {
                let result = job.await.unwrap_or_else(|e| Err(format!("engine task: {e}")));
                session_ref.lock().await.finish_engine(result);
            });
        }
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GraphSpec {
    Builtin(String),
    Inline(Value),
}

fn default_k() -> usize {
    1
}

#[derive(Deserialize)]
struct CreateRequest {
    graph: GraphSpec,
    #[serde(default = "default_role")]
    human_role: Role,
    #[serde(default)]
    engine: Engine,
    #[serde(default)]
    hints: bool,
    #[serde(default = "default_k")]
    k: usize,
}

fn default_role() -> Role {
    Role::Painter
}

async fn create_session(
    State(state): State<AppState>,
    Json(req): Json<CreateRequest>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let (name, graph) = match req.graph {
        GraphSpec::Builtin(spec) => {
            let inst = Instance::builtin(&spec).map_err(|e| ApiError::InvalidGraph(e.to_string()))?;
            (inst.name, inst.graph)
        }
        GraphSpec::Inline(v) => {
            let name = v.get("name").and_then(Value::as_str).unwrap_or("inline").to_string();
            (name, Graph::from_json_value(v).map_err(|e| ApiError::InvalidGraph(e.to_string()))?)
        }
    };
    let config = SessionConfig { human_role: req.human_role, engine: req.engine, hints: req.hints, k: req.k };
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = state.build_session(id, name, graph, config)?;
    let session_ref = state.insert(session);
    let mut session = session_ref.lock().await;
    log::info!("session {} created on {}", session.id, session.graph_name);
    advance(&state, &session_ref, &mut session).await?;
    Ok((StatusCode::CREATED, Json(session.snapshot())))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let session_ref = state.session(&id)?;
    let session = session_ref.lock().await;
    Ok(Json(session.snapshot()))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VertexRef {
    Index(usize),
    Label(String),
}

#[derive(Deserialize)]
struct MoveRequest {
    vertices: Vec<VertexRef>,
}

fn resolve_vertices(g: &Graph, refs: &[VertexRef]) -> Result<VertexSet, ApiError> {
    let mut out = VertexSet::EMPTY;
    for r in refs {
        let v = match r {
            VertexRef::Index(i) if *i < g.n() => *i,
            VertexRef::Index(i) => return Err(ApiError::IllegalMove(format!("unknown-vertex: {i}"))),
            VertexRef::Label(l) => {
                g.vertex_by_label(l).ok_or_else(|| ApiError::IllegalMove(format!("unknown-vertex: {l}")))?
            }
        };
        out.insert(v);
    }
    Ok(out)
}

async fn post_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<MoveRequest>,
) -> Result<Json<Value>, ApiError> {
    let session_ref = state.session(&id)?;
    let mut session = session_ref.lock().await;
    if session.is_finished() {
        return Err(ApiError::Finished(id));
    }
    if session.thinking {
        return Err(ApiError::Conflict("engine-thinking: poll the session until its move arrives".into()));
    }
    if session.to_move() != Some(session.config.human_role) {
        return Err(ApiError::Conflict("not-your-turn".into()));
    }
    let vertices = resolve_vertices(session.graph(), &req.vertices)?;
    session.play_human(vertices).map_err(|e| ApiError::IllegalMove(e.reason(session.graph())))?;
    advance(&state, &session_ref, &mut session).await?;
    Ok(Json(session.snapshot()))
}

async fn get_hint(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let session_ref = state.session(&id)?;
    let session = session_ref.lock().await;
    if session.is_finished() {
        return Err(ApiError::Finished(id));
    }
    if !session.config.hints {
        return Err(ApiError::HintsDisabled);
    }
    if session.thinking || session.to_move() != Some(session.config.human_role) {
        return Err(ApiError::Conflict("not-your-turn".into()));
    }
    let solver = session.solver.clone().ok_or_else(|| ApiError::Internal("session has no solver".into()))?;
    let remaining = session.state().remaining();
    let score = session.state().score();
    let mark = session.mark();
    let computed = tokio::task::spawn_blocking(move || {
        let mut s = solver.lock().unwrap_or_else(|e| e.into_inner());
        match mark {
            None => {
                let best = s.optimal_lister_move(remaining)?;
                let value = s.value(remaining)?;
                Ok::<_, SolveError>((Role::Lister, best, value as usize, None))
            }
            Some(m) => {
                let (reply, total) = s.optimal_painter_reply(remaining, m)?;
                let continuation = s.value(remaining.difference(reply))? as usize;
                Ok((Role::Painter, reply, total as usize, Some(continuation)))
            }
        }
    })
    .await
    .map_err(|e| ApiError::Internal(format!("hint task: {e}")))?
    .map_err(solve_error)?;
    let (role, vertices, value_to_go, continuation) = computed;
    let g = session.graph();
    let mut out = json!({
        "role": role,
        "vertices": vertices,
        "labels": vertices.iter().map(|v| g.label(v)).collect::<Vec<_>>(),
        "value_to_go": value_to_go,
        "projected_total": score + value_to_go,
    });
    if let Some(c) = continuation {
        out["continuation_value"] = json!(c);
    }
    Ok(Json(out))
}
