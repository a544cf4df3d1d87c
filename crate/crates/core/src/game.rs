//! Rules of the slow coloring game: states, legal replies, scoring and
//! transcripts. Every other module goes through [`GameState::apply_move`]
//! for legality.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{addable_vertices, maximal_independent_subsets, Graph};
use crate::set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("illegal mark: the marked set is empty")]
    EmptyMark,
    #[error("illegal mark: vertices {0} are not remaining")]
    NotRemaining(VertexSet),
    #[error("reply contains unmarked vertices {0}")]
    ReplyOutsideMark(VertexSet),
    #[error("reply not independent: {0} and {1} are adjacent")]
    NotIndependent(usize, usize),
    #[error("reply not maximal-independent: vertex {0} can be added")]
    NotMaximal(usize),
    #[error("game is already over")]
    GameOver,
}

impl MoveError {
    /// Short machine-readable reason, naming vertices by their labels.
    pub fn reason(&self, g: &Graph) -> String {
        match self {
            MoveError::EmptyMark => "empty-mark".into(),
            MoveError::NotRemaining(s) => format!("not-remaining: {}", g.format_set(*s)),
            MoveError::ReplyOutsideMark(s) => format!("not-marked: {}", g.format_set(*s)),
            MoveError::NotIndependent(u, v) => {
                format!("not-independent: vertices {} and {} adjacent", g.label(*u), g.label(*v))
            }
            MoveError::NotMaximal(v) => format!("not-maximal: vertex {} addable", g.label(*v)),
            MoveError::GameOver => "game-over".into(),
        }
    }
}

/// One round: Lister's mark and Painter's deletion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub marked: VertexSet,
    pub deleted: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    graph: Arc<Graph>,
    remaining: VertexSet,
    score: usize,
    transcript: Vec<Move>,
}

impl GameState {
    pub fn new(graph: Arc<Graph>) -> GameState {
        let remaining = graph.vertices();
        GameState { graph, remaining, score: 0, transcript: Vec::new() }
    }

    /// Mid-game position with an empty transcript, for subgame analysis.
    pub fn at(graph: Arc<Graph>, remaining: VertexSet) -> GameState {
        debug_assert!(remaining.is_subset(graph.vertices()));
        GameState { graph, remaining, score: 0, transcript: Vec::new() }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn remaining(&self) -> VertexSet {
        self.remaining
    }

    pub fn score(&self) -> usize {
        self.score
    }

    pub fn transcript(&self) -> &[Move] {
        &self.transcript
    }

    pub fn is_terminal(&self) -> bool {
        self.remaining.is_empty()
    }

    pub fn check_mark(&self, m: VertexSet) -> Result<(), MoveError> {
        if self.is_terminal() {
            return Err(MoveError::GameOver);
        }
        if m.is_empty() {
            return Err(MoveError::EmptyMark);
        }
        let stray = m.difference(self.remaining);
        if !stray.is_empty() {
            return Err(MoveError::NotRemaining(stray));
        }
        Ok(())
    }

    /// Painter's legal replies to `m`: the maximal independent subsets of G[m].
    pub fn legal_painter_replies(&self, m: VertexSet) -> Result<Vec<VertexSet>, MoveError> {
        self.check_mark(m)?;
        Ok(maximal_independent_subsets(&self.graph, m).expect("mark checked nonempty"))
    }

    pub fn check_reply(&self, m: VertexSet, d: VertexSet) -> Result<(), MoveError> {
        self.check_mark(m)?;
        let outside = d.difference(m);
        if !outside.is_empty() {
            return Err(MoveError::ReplyOutsideMark(outside));
        }
        for u in d {
            if let Some(v) = self.graph.neighbors(u).intersection(d).first() {
                return Err(MoveError::NotIndependent(u.min(v), u.max(v)));
            }
        }
        if let Some(v) = addable_vertices(&self.graph, m, d).first() {
            return Err(MoveError::NotMaximal(v));
        }
        Ok(())
    }

    /// The successor state; `self` is left untouched.
    pub fn apply_move(&self, m: VertexSet, d: VertexSet) -> Result<GameState, MoveError> {
        self.check_reply(m, d)?;
        let mut transcript = self.transcript.clone();
        transcript.push(Move { marked: m, deleted: d });
        Ok(GameState {
            graph: Arc::clone(&self.graph),
            remaining: self.remaining.difference(d),
            score: self.score + m.len(),
            transcript,
        })
    }

    pub fn to_transcript(&self) -> Transcript {
        Transcript { graph: (*self.graph).clone(), moves: self.transcript.clone(), score: self.score }
    }
}

pub fn new_game(g: &Graph) -> GameState {
    GameState::new(Arc::new(g.clone()))
}

/// Serialized record of a (possibly unfinished) game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub graph: Graph,
    pub moves: Vec<Move>,
    pub score: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("move {index}: {source}")]
    Illegal { index: usize, source: MoveError },
    #[error("recorded score {recorded} but replay gives {replayed}")]
    ScoreMismatch { recorded: usize, replayed: usize },
}

impl Transcript {
    /// Re-validates every move and the recorded score.
    pub fn replay(&self) -> Result<GameState, ReplayError> {
        let mut state = new_game(&self.graph);
        for (index, mv) in self.moves.iter().enumerate() {
            state = state
                .apply_move(mv.marked, mv.deleted)
                .map_err(|source| ReplayError::Illegal { index, source })?;
        }
        if state.score() != self.score {
            return Err(ReplayError::ScoreMismatch { recorded: self.score, replayed: state.score() });
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    #[test]
    fn fresh_games() {
        let s = new_game(&library::prism());
        assert_eq!(s.remaining().len(), 6);
        assert_eq!(s.score(), 0);
        assert!(!s.is_terminal());
        assert_eq!(new_game(&library::complete(1)).remaining().len(), 1);
    }

    #[test]
    fn replies_to_full_prism_mark() {
        let s = new_game(&library::prism());
        let replies = s.legal_painter_replies(s.remaining()).unwrap();
        assert!(replies.contains(&set(&[2, 3])));
        let p3 = new_game(&library::path(3));
        assert_eq!(p3.legal_painter_replies(set(&[0, 1, 2])).unwrap(), vec![set(&[1]), set(&[0, 2])]);
        assert_eq!(s.legal_painter_replies(set(&[4])).unwrap(), vec![set(&[4])]);
        assert_eq!(s.legal_painter_replies(VertexSet::EMPTY), Err(MoveError::EmptyMark));
    }

    #[test]
    fn apply_prism_round() {
        let s = new_game(&library::prism());
        let next = s.apply_move(s.remaining(), set(&[2, 3])).unwrap();
        assert_eq!(next.remaining(), set(&[0, 1, 4, 5]));
        assert_eq!(next.score(), 6);
        assert_eq!(next.transcript().len(), 1);
        // the original state is unchanged
        assert_eq!(s.score(), 0);
    }

    #[test]
    fn single_vertex_game() {
        let s = new_game(&library::complete(1));
        let done = s.apply_move(set(&[0]), set(&[0])).unwrap();
        assert!(done.is_terminal());
        assert_eq!(done.score(), 1);
        assert_eq!(done.apply_move(set(&[0]), set(&[0])), Err(MoveError::GameOver));
    }

    #[test]
    fn illegal_replies() {
        let g = library::prism();
        let s = new_game(&g);
        // paper vertex 1 alone: paper vertex 5 (index 4) can be added
        let err = s.apply_move(s.remaining(), set(&[0])).unwrap_err();
        assert_eq!(err, MoveError::NotMaximal(4));
        assert_eq!(err.reason(&g), "not-maximal: vertex 5 addable");
        assert_eq!(s.apply_move(s.remaining(), set(&[0, 1])), Err(MoveError::NotIndependent(0, 1)));
        assert_eq!(s.apply_move(set(&[0]), set(&[1])), Err(MoveError::ReplyOutsideMark(set(&[1]))));
        let after = s.apply_move(s.remaining(), set(&[2, 3])).unwrap();
        assert_eq!(after.check_mark(set(&[2])), Err(MoveError::NotRemaining(set(&[2]))));
    }

    #[test]
    fn transcript_replays() {
        let s = new_game(&library::path(3));
        let s = s.apply_move(set(&[0, 1, 2]), set(&[0, 2])).unwrap();
        let s = s.apply_move(set(&[1]), set(&[1])).unwrap();
        let t = s.to_transcript();
        let json = serde_json::to_string(&t).unwrap();
        let back: Transcript = serde_json::from_str(&json).unwrap();
        assert_eq!(back.replay().unwrap().score(), 4);
        let mut forged = back.clone();
        forged.score = 5;
        assert!(matches!(forged.replay(), Err(ReplayError::ScoreMismatch { .. })));
        forged.score = 4;
        forged.moves[0].deleted = set(&[0]);
        assert!(matches!(forged.replay(), Err(ReplayError::Illegal { index: 0, .. })));
    }
}
