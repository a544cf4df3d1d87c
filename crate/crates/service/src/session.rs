//! One game between a human and the engine, independent of HTTP.

use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use slowcolor::strategy::{
    lister_exact, painter_exact, GreedyLister, GreedyPainter, ListerStrategy, PainterStrategy, SharedSolver,
};
use slowcolor::{GameState, Graph, Move, MoveError, Role, StrategyError, Transcript, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Exact,
    /// Lister marks everything left; Painter deletes a greedy maximal set.
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub human_role: Role,
    pub engine: Engine,
    pub hints: bool,
    pub k: usize,
}

/// Whose decision the session is waiting for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    AwaitingHuman,
    EngineThinking,
    EngineFailed,
    Finished,
}

pub struct Session {
    pub id: String,
    pub graph_name: String,
    pub config: SessionConfig,
    state: GameState,
    /// Lister's mark while Painter's reply is outstanding.
    mark: Option<VertexSet>,
    pub thinking: bool,
    pub engine_error: Option<String>,
    /// `3n/2 + k` when the graph meets the main theorem's hypotheses.
    pub bound: Option<usize>,
    pub solver: Option<SharedSolver>,
    pub created: u64,
    pub updated: u64,
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Everything an engine computation needs, detached from the session so it
/// can run on a blocking thread.
pub struct EngineTask {
    engine: Engine,
    role: Role,
    state: GameState,
    mark: Option<VertexSet>,
    solver: Option<SharedSolver>,
}

impl EngineTask {
    /// Cheap to answer right away: greedy play, or a subgame already in the memo.
    pub fn is_warm(&self) -> bool {
        match (&self.engine, &self.solver) {
            (Engine::Greedy, _) => true,
            // a busy solver counts as cold rather than blocking the request
            (Engine::Exact, Some(solver)) => {
                solver.try_lock().is_ok_and(|s| s.cached_value(self.state.remaining()).is_some())
            }
            (Engine::Exact, None) => false,
        }
    }

    pub fn run(self) -> Result<VertexSet, StrategyError> {
        match (self.role, self.engine) {
            (Role::Lister, Engine::Greedy) => GreedyLister.mark(&self.state),
            (Role::Painter, Engine::Greedy) => GreedyPainter.reply(&self.state, self.mark.expect("mark pending")),
            (Role::Lister, Engine::Exact) => lister_exact(self.solver.expect("exact engine has a solver")).mark(&self.state),
            (Role::Painter, Engine::Exact) => painter_exact(self.solver.expect("exact engine has a solver"))
                .reply(&self.state, self.mark.expect("mark pending")),
        }
    }
}

impl Session {
    pub fn new(
        id: String,
        graph_name: String,
        graph: Graph,
        config: SessionConfig,
        bound: Option<usize>,
        solver: Option<SharedSolver>,
    ) -> Session {
        let now = unix_now();
        Session {
            id,
            graph_name,
            config,
            state: GameState::new(Arc::new(graph)),
            mark: None,
            thinking: false,
            engine_error: None,
            bound,
            solver,
            created: now,
            updated: now,
        }
    }

    /// Rebuilds a session from a saved transcript, re-validating every move.
    pub fn restore(saved: SavedSession, bound: Option<usize>, solver: Option<SharedSolver>) -> Result<Session, String> {
        let transcript = Transcript { graph: saved.graph, moves: saved.moves, score: saved.score };
        let state = transcript.replay().map_err(|e| format!("session {}: {e}", saved.id))?;
        if let Some(m) = saved.mark {
            state.check_mark(m).map_err(|e| format!("session {}: {e}", saved.id))?;
        }
        Ok(Session {
            id: saved.id,
            graph_name: saved.graph_name,
            config: saved.config,
            state,
            mark: saved.mark,
            thinking: false,
            engine_error: None,
            bound,
            solver,
            created: saved.created,
            updated: saved.updated,
        })
    }

    pub fn save(&self) -> SavedSession {
        let t = self.state.to_transcript();
        SavedSession {
            id: self.id.clone(),
            graph_name: self.graph_name.clone(),
            graph: t.graph,
            config: self.config.clone(),
            moves: t.moves,
            score: t.score,
            mark: self.mark,
            created: self.created,
            updated: self.updated,
        }
    }

    pub fn graph(&self) -> &Graph {
        self.state.graph()
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn mark(&self) -> Option<VertexSet> {
        self.mark
    }

    pub fn is_finished(&self) -> bool {
        self.state.is_terminal()
    }

    pub fn to_move(&self) -> Option<Role> {
        if self.is_finished() {
            None
        } else if self.mark.is_some() {
            Some(Role::Painter)
        } else {
            Some(Role::Lister)
        }
    }

    pub fn status(&self) -> Status {
        if self.is_finished() {
            Status::Finished
        } else if self.thinking {
            Status::EngineThinking
        } else if self.engine_error.is_some() {
            Status::EngineFailed
        } else {
            Status::AwaitingHuman
        }
    }

    pub fn engine_to_move(&self) -> bool {
        !self.thinking && self.engine_error.is_none() && self.to_move() == Some(self.config.human_role.other())
    }

    pub fn engine_task(&self) -> EngineTask {
        EngineTask {
            engine: self.config.engine,
            role: self.config.human_role.other(),
            state: self.state.clone(),
            mark: self.mark,
            solver: self.solver.clone(),
        }
    }

    /// Plays `vertices` for whichever side is to move.
    fn play(&mut self, vertices: VertexSet) -> Result<(), MoveError> {
        match self.mark {
            None => {
                self.state.check_mark(vertices)?;
                self.mark = Some(vertices);
            }
            Some(m) => {
                self.state = self.state.apply_move(m, vertices)?;
                self.mark = None;
            }
        }
        self.updated = unix_now();
        Ok(())
    }

    /// The human's move; the caller has checked that it is the human's turn.
    pub fn play_human(&mut self, vertices: VertexSet) -> Result<(), MoveError> {
        debug_assert_eq!(self.to_move(), Some(self.config.human_role));
        self.play(vertices)
    }

    pub fn finish_engine(&mut self, outcome: Result<VertexSet, String>) {
        self.thinking = false;
        let applied = outcome.and_then(|v| self.play(v).map_err(|e| format!("engine played an illegal move: {e}")));
        if let Err(e) = applied {
            log::error!("session {}: {e}", self.id);
            self.engine_error = Some(e);
            self.updated = unix_now();
        }
    }

    pub fn snapshot(&self) -> Value {
        let g = self.graph();
        let labels: Vec<String> = (0..g.n()).map(|v| g.label(v)).collect();
        let label_set = |s: VertexSet| s.iter().map(|v| g.label(v)).collect::<Vec<_>>();
        let transcript: Vec<Value> = self
            .state
            .transcript()
            .iter()
            .map(|Move { marked, deleted }| json!({ "marked": marked, "deleted": deleted }))
            .collect();
        let mut out = json!({
            "id": self.id,
            "graph": {
                "name": self.graph_name,
                "n": g.n(),
                "labels": labels,
                "edges": g.edges(),
            },
            "human_role": self.config.human_role,
            "engine": self.config.engine,
            "hints": self.config.hints,
            "k": self.config.k,
            "status": self.status(),
            "pending": self.thinking,
            "to_move": self.to_move(),
            "mark": self.mark,
            "mark_labels": self.mark.map(label_set),
            "remaining": self.state.remaining(),
            "remaining_labels": label_set(self.state.remaining()),
            "score": self.state.score(),
            "transcript": transcript,
            "created": self.created,
            "updated": self.updated,
        });
        if let Some(e) = &self.engine_error {
            out["engine_error"] = json!(e);
        }
        if self.is_finished() {
            let score = self.state.score();
            out["final_score"] = json!(score);
            out["bound"] = match self.bound {
                Some(claim) => json!({ "claim": claim, "met": score >= claim }),
                None => Value::Null,
            };
        }
        out
    }
}

/// A session as written to the snapshot file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SavedSession {
    pub id: String,
    pub graph_name: String,
    pub graph: Graph,
    pub config: SessionConfig,
    pub moves: Vec<Move>,
    pub score: usize,
    pub mark: Option<VertexSet>,
    pub created: u64,
    pub updated: u64,
}
