//! In-memory game sessions where a human defends against the theorem
//! attacker, and the HTTP API around them.
//!
//! Illegal moves are rejected and may be retried; a legal move that leaves
//! the attacked vertex empty ends the game just like a forfeit, and is
//! recorded as one so the trace only holds covering defences.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use etdom_core::attack::{AttackError, Verdict};
use etdom_core::engine::{check_move, smallest_unoccupied, Turn};
use etdom_core::neocol::VertexClass;
use etdom_core::tree::Vertex;
use etdom_core::{Analysis, AttackerState, Defense, DefenseMove, GameTrace, GuardConfig, Outcome};
use serde::{Deserialize, Serialize};

use crate::format::{parse_edge_list, serialize_tree};
use crate::json::{AttackJson, GameTraceJson, NeocolJson, OutcomeJson, PartJson};

pub const DEFAULT_IDLE: Duration = Duration::from_secs(60 * 60);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ServiceError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ServiceError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ServiceError {
            status,
            code,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ServiceError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn not_found(id: &str) -> Self {
        ServiceError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session {id}"))
    }

    fn wrong_phase(expected: &str) -> Self {
        ServiceError::new(StatusCode::CONFLICT, "wrong_phase", format!("session is not {expected}"))
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    AwaitingPlacement,
    AwaitingDefense(Vertex),
    Finished(Outcome),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum PhaseJson {
    AwaitingPlacement,
    AwaitingDefense { attacked: Vertex },
    Finished { outcome: OutcomeJson },
}

impl From<Phase> for PhaseJson {
    fn from(p: Phase) -> Self {
        match p {
            Phase::AwaitingPlacement => PhaseJson::AwaitingPlacement,
            Phase::AwaitingDefense(attacked) => PhaseJson::AwaitingDefense { attacked },
            Phase::Finished(o) => PhaseJson::Finished { outcome: o.into() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Annotations {
    pub root: Vertex,
    pub parts: Vec<PartJson>,
    pub classes: Vec<String>,
    /// Display colour per vertex: J orange, I yellow, L green.
    pub colors: Vec<&'static str>,
    /// Subtree deficits behind the current attack, if the attacker computed any.
    pub deficits: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionView {
    pub id: String,
    pub tree: String,
    pub n: usize,
    pub k: usize,
    pub edn: usize,
    pub diameter: usize,
    pub phase: PhaseJson,
    pub config: Option<Vec<Vertex>>,
    /// Attacks made so far, including the one awaiting defence.
    pub turn: usize,
    pub last_attack: Option<AttackJson>,
    pub annotations: Annotations,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub tree: String,
    pub k: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceRequest {
    pub vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefendRequest {
    pub moves: Option<Vec<(Vertex, Vertex)>>,
    pub forfeit: Option<bool>,
}

impl DefendRequest {
    pub fn moves(moves: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        DefendRequest {
            moves: Some(moves.into_iter().collect()),
            forfeit: None,
        }
    }

    pub fn forfeit() -> Self {
        DefendRequest {
            moves: None,
            forfeit: Some(true),
        }
    }
}

pub fn class_color(c: VertexClass) -> &'static str {
    match c {
        VertexClass::Joining => "orange",
        VertexClass::Inner => "yellow",
        VertexClass::Leaf => "green",
    }
}

struct Session {
    id: String,
    an: Analysis,
    k: usize,
    initial: GuardConfig,
    config: GuardConfig,
    attacker: AttackerState,
    turns: Vec<Turn>,
    phase: Phase,
    last_attack: Option<AttackJson>,
}

impl Session {
    fn view(&self) -> SessionView {
        let an = &self.an;
        let summary = NeocolJson::new(an);
        SessionView {
            id: self.id.clone(),
            tree: serialize_tree(an.tree()),
            n: an.n(),
            k: self.k,
            edn: an.edn(),
            diameter: an.tree().diameter(),
            phase: self.phase.into(),
            config: (self.phase != Phase::AwaitingPlacement).then(|| self.config.iter().collect()),
            turn: self.turns.len() + matches!(self.phase, Phase::AwaitingDefense(_)) as usize,
            last_attack: self.last_attack.clone(),
            annotations: Annotations {
                root: summary.root,
                parts: summary.parts,
                classes: summary.classes,
                colors: an.classes.as_slice().iter().map(|&c| class_color(c)).collect(),
                deficits: self.last_attack.as_ref().and_then(|a| a.deficits.clone()),
            },
        }
    }

    /// The attacker's move against the current configuration.
    fn attack(&mut self) -> Result<(), ServiceError> {
        let root = self.an.rooted.root();
        match self.attacker.explain(&self.an, &self.config) {
            Ok(diag) => {
                let json = AttackJson::new(diag.as_ref(), root);
                self.phase = match diag.map(|d| d.verdict) {
                    Some(Verdict::AlreadyWon) => Phase::Finished(Outcome::AttackerWins(self.turns.len())),
                    _ => Phase::AwaitingDefense(json.b),
                };
                self.last_attack = Some(json);
            }
            // With EDN(T) or more guards the theorem gives the attacker nothing.
            Err(AttackError::NoDeficientVertex) => {
                let b = smallest_unoccupied(self.an.n(), &self.config);
                self.last_attack = Some(AttackJson {
                    a: None,
                    deficits: None,
                    v: None,
                    x: None,
                    d: None,
                    b,
                    verdict: "fallback".into(),
                });
                self.phase = Phase::AwaitingDefense(b);
            }
            Err(e) => {
                return Err(ServiceError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()));
            }
        }
        Ok(())
    }

    fn place(&mut self, vertices: &[Vertex]) -> Result<(), ServiceError> {
        if self.phase != Phase::AwaitingPlacement {
            return Err(ServiceError::wrong_phase("awaiting placement"));
        }
        let invalid = |m: String| ServiceError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_placement", m);
        let mut c = GuardConfig::new();
        for &v in vertices {
            if v >= self.an.n() {
                return Err(invalid(format!("vertex {v} does not exist")));
            }
            if !c.insert(v) {
                return Err(invalid(format!("vertex {v} listed twice")));
            }
        }
        if c.len() != self.k {
            return Err(invalid(format!("expected {} guards, got {}", self.k, c.len())));
        }
        self.initial = c.clone();
        self.config = c;
        self.attack()
    }

    fn defend(&mut self, req: &DefendRequest) -> Result<(), ServiceError> {
        let Phase::AwaitingDefense(attacked) = self.phase else {
            return Err(ServiceError::wrong_phase("awaiting defense"));
        };
        let malformed = |m: &str| ServiceError::new(StatusCode::BAD_REQUEST, "malformed_move", m);
        let turn = self.turns.len() + 1;
        let mv = match (&req.moves, req.forfeit) {
            (None, Some(true)) => None,
            (Some(pairs), None | Some(false)) => Some(DefenseMove::new(pairs.iter().copied())),
            (None, _) => return Err(malformed("expected {\"moves\": [[from, to], ...]} or {\"forfeit\": true}")),
            (Some(_), Some(true)) => return Err(malformed("moves and forfeit are exclusive")),
        };
        let next = match mv {
            None => None,
            Some(mv) => {
                let next = check_move(self.an.tree(), &self.config, &mv).map_err(|e| {
                    ServiceError::new(StatusCode::UNPROCESSABLE_ENTITY, "illegal_move", e.to_string())
                })?;
                next.contains(attacked).then_some((mv, next))
            }
        };
        match next {
            Some((mv, next)) => {
                self.turns.push(Turn {
                    attack: attacked,
                    defense: Defense::Moves(mv),
                });
                self.config = next;
                self.attack()
            }
            None => {
                self.turns.push(Turn {
                    attack: attacked,
                    defense: Defense::Forfeit,
                });
                self.phase = Phase::Finished(Outcome::AttackerWins(turn));
                Ok(())
            }
        }
    }

    fn trace(&self) -> GameTrace {
        GameTrace {
            tree: self.an.tree().clone(),
            initial: self.initial.clone(),
            turns: self.turns.clone(),
            outcome: match self.phase {
                Phase::Finished(o) => o,
                _ => Outcome::DefenderSurvived(self.turns.len()),
            },
        }
    }
}

struct Entry {
    session: RwLock<Session>,
    touched: Mutex<Instant>,
}

/// All live sessions. Each session has its own lock, so sessions never
/// block each other; reads of one session share its lock.
pub struct SessionStore {
    sessions: Mutex<HashMap<String, Arc<Entry>>>,
    idle: Duration,
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::new(DEFAULT_IDLE)
    }
}

impl SessionStore {
    pub fn new(idle: Duration) -> Self {
        SessionStore {
            sessions: Mutex::new(HashMap::new()),
            idle,
        }
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn purge_idle(&self) {
        let now = Instant::now();
        self.sessions
            .lock()
            .unwrap()
            .retain(|_, e| now.duration_since(*e.touched.lock().unwrap()) <= self.idle);
    }

    fn entry(&self, id: &str) -> Result<Arc<Entry>, ServiceError> {
        let e = self
            .sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::not_found(id))?;
        let mut touched = e.touched.lock().unwrap();
        if touched.elapsed() > self.idle {
            drop(touched);
            self.sessions.lock().unwrap().remove(id);
            return Err(ServiceError::not_found(id));
        }
        *touched = Instant::now();
        drop(touched);
        Ok(e)
    }

    pub fn create(&self, tree: &str, k: usize) -> Result<SessionView, ServiceError> {
        self.purge_idle();
        let t = parse_edge_list(tree.as_bytes())
            .map_err(|e| ServiceError::new(StatusCode::UNPROCESSABLE_ENTITY, "malformed_tree", e.to_string()))?;
        if k > t.n() {
            return Err(ServiceError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "invalid_k",
                format!("k = {k} exceeds n = {}", t.n()),
            ));
        }
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session {
            id: id.clone(),
            an: Analysis::new(t),
            k,
            initial: GuardConfig::new(),
            config: GuardConfig::new(),
            attacker: AttackerState::new(),
            turns: Vec::new(),
            phase: Phase::AwaitingPlacement,
            last_attack: None,
        };
        let view = session.view();
        let entry = Arc::new(Entry {
            session: RwLock::new(session),
            touched: Mutex::new(Instant::now()),
        });
        self.sessions.lock().unwrap().insert(id, entry);
        Ok(view)
    }

    pub fn view(&self, id: &str) -> Result<SessionView, ServiceError> {
        Ok(self.entry(id)?.session.read().unwrap().view())
    }

    pub fn place(&self, id: &str, vertices: &[Vertex]) -> Result<SessionView, ServiceError> {
        let e = self.entry(id)?;
        let mut s = e.session.write().unwrap();
        s.place(vertices)?;
        Ok(s.view())
    }

    pub fn defend(&self, id: &str, req: &DefendRequest) -> Result<SessionView, ServiceError> {
        let e = self.entry(id)?;
        let mut s = e.session.write().unwrap();
        s.defend(req)?;
        Ok(s.view())
    }

    pub fn trace(&self, id: &str) -> Result<GameTrace, ServiceError> {
        Ok(self.entry(id)?.session.read().unwrap().trace())
    }
}

fn body<T: serde::de::DeserializeOwned>(bytes: &Bytes) -> Result<T, ServiceError> {
    serde_json::from_slice(bytes).map_err(|e| ServiceError::bad_request(e.to_string()))
}

type Store = State<Arc<SessionStore>>;

async fn create_handler(State(store): Store, bytes: Bytes) -> Result<Response, ServiceError> {
    let req: CreateRequest = body(&bytes)?;
    let view = store.create(&req.tree, req.k)?;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn view_handler(State(store): Store, Path(id): Path<String>) -> Result<Json<SessionView>, ServiceError> {
    store.view(&id).map(Json)
}

async fn place_handler(
    State(store): Store,
    Path(id): Path<String>,
    bytes: Bytes,
) -> Result<Json<SessionView>, ServiceError> {
    let req: PlaceRequest = body(&bytes)?;
    store.place(&id, &req.vertices).map(Json)
}

async fn defend_handler(
    State(store): Store,
    Path(id): Path<String>,
    bytes: Bytes,
) -> Result<Json<SessionView>, ServiceError> {
    let req: DefendRequest = body(&bytes)?;
    store.defend(&id, &req).map(Json)
}

async fn trace_handler(State(store): Store, Path(id): Path<String>) -> Result<Json<GameTraceJson>, ServiceError> {
    store.trace(&id).map(|t| Json(GameTraceJson::from(&t)))
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/session", post(create_handler))
        .route("/session/{id}", get(view_handler))
        .route("/session/{id}/place", post(place_handler))
        .route("/session/{id}/defend", post(defend_handler))
        .route("/session/{id}/trace", get(trace_handler))
        .with_state(store)
}

/// Serves the API on `127.0.0.1:port` until the process exits.
pub async fn serve(port: u16, store: Arc<SessionStore>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store)).await
}
