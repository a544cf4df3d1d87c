//! Exact analysis of the slow coloring game.
//!
//! Lister marks a nonempty set `M` of the remaining vertices and scores
//! `|M|`; Painter deletes a maximal independent subset of `M`. The game
//! value `s̊(G)` is computed exactly by [`solver`], and [`verify`]
//! checks the lower bound `s̊(G) ≥ 3n/2 + k` for 3k-connected graphs with
//! a perfect matching, together with the constructions behind it.

pub mod connectivity;
pub mod forest;
pub mod game;
pub mod graph;
pub mod library;
pub mod set;
pub mod solver;
pub mod strategy;
pub mod verify;

pub use connectivity::{Matching, PathSystem};
pub use game::{GameState, Move, MoveError, Transcript};
pub use graph::{load_graph, Graph, GraphError};
pub use set::{Edge, EdgeSet, VertexSet};
pub use solver::{solve, solve_additive, SolveError, SolveOptions, SolveResult, Solver};
pub use strategy::{play_match, Claim, MatchOutcome, Role, StrategyError};
pub use verify::{ClaimId, Instance, TheoremReport, Verdict, VerifyError, VerifyOptions};
