//! Lister and Painter strategies, a match runner, and an exhaustive sweep of
//! a Lister strategy against every Painter reply sequence.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::Matching;
use crate::game::{GameState, Move, MoveError, Transcript};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::solver::{SolveError, SolveOptions, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Lister,
    Painter,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::Lister => Role::Painter,
            Role::Painter => Role::Lister,
        }
    }
}

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("opening needs 4k = {} vertices but the graph has {n}", 4 * k)]
    TooSmall { n: usize, k: usize },
    #[error("matching is not perfect")]
    MatchingNotPerfect,
    #[error("strategy is bound to a different graph")]
    WrongGraph,
    #[error("{strategy} played an illegal move ({error}) in state {state}")]
    Illegal { strategy: String, error: MoveError, state: String },
}

pub trait ListerStrategy: Send + Sync {
    fn name(&self) -> String;
    fn mark(&self, state: &GameState) -> Result<VertexSet, StrategyError>;
    /// True when every mark after the first depends only on the remaining
    /// set, which lets sweeps share work between transposed positions.
    fn is_positional(&self) -> bool {
        false
    }
}

pub trait PainterStrategy: Send + Sync {
    fn name(&self) -> String;
    fn reply(&self, state: &GameState, mark: VertexSet) -> Result<VertexSet, StrategyError>;
}

/// A solver shared between strategies and sessions on the same graph.
pub type SharedSolver = Arc<Mutex<Solver>>;

pub fn shared_solver(g: &Graph, opts: SolveOptions) -> Result<SharedSolver, SolveError> {
    Ok(Arc::new(Mutex::new(Solver::for_graph(g, opts)?)))
}

fn lock(solver: &SharedSolver) -> std::sync::MutexGuard<'_, Solver> {
    // a panic mid-search leaves only a partially filled memo, which stays sound
    solver.lock().unwrap_or_else(|e| e.into_inner())
}

fn check_graph(solver: &Solver, state: &GameState) -> Result<(), StrategyError> {
    if solver.graph() != state.graph() {
        return Err(StrategyError::WrongGraph);
    }
    Ok(())
}

/// The union of the `2k` matching pairs with the smallest minimum endpoints.
pub fn lister_3k_opening(g: &Graph, matching: &Matching, k: usize) -> Result<VertexSet, StrategyError> {
    if !matching.is_perfect_for(g) {
        return Err(StrategyError::MatchingNotPerfect);
    }
    if g.n() < 4 * k {
        return Err(StrategyError::TooSmall { n: g.n(), k });
    }
    let mut pairs = matching.pairs();
    pairs.sort();
    Ok(pairs.iter().take(2 * k).flat_map(|&(u, v)| [u, v]).collect())
}

pub struct ExactLister {
    solver: SharedSolver,
}

pub fn lister_exact(solver: SharedSolver) -> ExactLister {
    ExactLister { solver }
}

impl ListerStrategy for ExactLister {
    fn name(&self) -> String {
        "exact-lister".into()
    }

    fn mark(&self, state: &GameState) -> Result<VertexSet, StrategyError> {
        let mut solver = lock(&self.solver);
        check_graph(&solver, state)?;
        Ok(solver.optimal_lister_move(state.remaining())?)
    }

    fn is_positional(&self) -> bool {
        true
    }
}

/// Opens with [`lister_3k_opening`], then plays exact-optimal marks.
pub struct ThreeKLister {
    opening: VertexSet,
    k: usize,
    exact: ExactLister,
}

pub fn lister_3k_strategy(
    g: &Graph,
    matching: &Matching,
    k: usize,
    solver: SharedSolver,
) -> Result<ThreeKLister, StrategyError> {
    let opening = lister_3k_opening(g, matching, k)?;
    if lock(&solver).graph() != g {
        return Err(StrategyError::WrongGraph);
    }
    Ok(ThreeKLister { opening, k, exact: lister_exact(solver) })
}

impl ThreeKLister {
    pub fn opening(&self) -> VertexSet {
        self.opening
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl ListerStrategy for ThreeKLister {
    fn name(&self) -> String {
        format!("3k-lister(k={})", self.k)
    }

    fn mark(&self, state: &GameState) -> Result<VertexSet, StrategyError> {
        if state.transcript().is_empty() && state.remaining() == state.graph().vertices() {
            return Ok(self.opening);
        }
        self.exact.mark(state)
    }

    fn is_positional(&self) -> bool {
        true
    }
}

pub struct ExactPainter {
    solver: SharedSolver,
}

pub fn painter_exact(solver: SharedSolver) -> ExactPainter {
    ExactPainter { solver }
}

impl PainterStrategy for ExactPainter {
    fn name(&self) -> String {
        "exact-painter".into()
    }

    fn reply(&self, state: &GameState, mark: VertexSet) -> Result<VertexSet, StrategyError> {
        let mut solver = lock(&self.solver);
        check_graph(&solver, state)?;
        Ok(solver.optimal_painter_reply(state.remaining(), mark)?.0)
    }
}

/// Largest maximal independent reply; ties go to the smallest mask.
pub fn painter_greedy(state: &GameState, mark: VertexSet) -> Result<VertexSet, MoveError> {
    let replies = state.legal_painter_replies(mark)?;
    let best = replies.iter().map(|d| d.len()).max().expect("nonempty marks have replies");
    Ok(replies.into_iter().find(|d| d.len() == best).expect("maximum is attained"))
}

pub struct GreedyPainter;

impl PainterStrategy for GreedyPainter {
    fn name(&self) -> String {
        "greedy-painter".into()
    }

    fn reply(&self, state: &GameState, mark: VertexSet) -> Result<VertexSet, StrategyError> {
        painter_greedy(state, mark).map_err(|error| illegal(&self.name(), error, state))
    }
}

/// Marks every remaining vertex.
pub struct GreedyLister;

impl ListerStrategy for GreedyLister {
    fn name(&self) -> String {
        "mark-all-lister".into()
    }

    fn mark(&self, state: &GameState) -> Result<VertexSet, StrategyError> {
        Ok(state.remaining())
    }

    fn is_positional(&self) -> bool {
        true
    }
}

fn illegal(strategy: &str, error: MoveError, state: &GameState) -> StrategyError {
    let state = serde_json::to_string(&state.to_transcript()).unwrap_or_else(|e| format!("<unserializable: {e}>"));
    StrategyError::Illegal { strategy: strategy.to_string(), error, state }
}

/// A bound one side claims to guarantee.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub by: Role,
    pub bound: usize,
}

impl Claim {
    pub fn lister(bound: usize) -> Claim {
        Claim { by: Role::Lister, bound }
    }

    pub fn painter(bound: usize) -> Claim {
        Claim { by: Role::Painter, bound }
    }

    pub fn met_by(&self, score: usize) -> bool {
        match self.by {
            Role::Lister => score >= self.bound,
            Role::Painter => score <= self.bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub transcript: Transcript,
    pub score: usize,
    pub claimed_bound: Option<usize>,
    pub claimed_by: Option<Role>,
    /// Vacuously true without a claim.
    pub bound_met: bool,
}

/// Plays a full game; every move goes through the engine's legality checks.
pub fn play_match(
    g: &Graph,
    lister: &dyn ListerStrategy,
    painter: &dyn PainterStrategy,
    claim: Option<Claim>,
) -> Result<MatchOutcome, StrategyError> {
    let mut state = GameState::new(Arc::new(g.clone()));
    while !state.is_terminal() {
        let m = lister.mark(&state)?;
        state.check_mark(m).map_err(|e| illegal(&lister.name(), e, &state))?;
        let d = painter.reply(&state, m)?;
        state = state.apply_move(m, d).map_err(|e| illegal(&painter.name(), e, &state))?;
    }
    let score = state.score();
    Ok(MatchOutcome {
        transcript: state.to_transcript(),
        score,
        claimed_bound: claim.map(|c| c.bound),
        claimed_by: claim.map(|c| c.by),
        bound_met: claim.is_none_or(|c| c.met_by(score)),
    })
}

/// Result of playing a Lister strategy against every Painter reply sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub lister: String,
    pub min_score: usize,
    pub max_score: usize,
    /// A reply sequence reaching `min_score`.
    pub worst_line: Vec<Move>,
    /// Complete Painter reply sequences covered.
    pub branches: u128,
    /// Distinct positions expanded.
    pub positions: usize,
    /// Largest Painter reply to the first mark.
    pub max_first_reply: usize,
    /// Share of the first-round replies whose subtrees were fully explored.
    pub coverage: f64,
    pub complete: bool,
}

#[derive(Clone)]
struct Subtree {
    min: usize,
    max: usize,
    worst: Vec<Move>,
    branches: u128,
}

struct Sweep<'a> {
    lister: &'a dyn ListerStrategy,
    budget: usize,
    positions: usize,
    memo: HashMap<VertexSet, Subtree>,
}

struct OutOfBudget;

impl Sweep<'_> {
    /// Scores to go from `state`, over every Painter line.
    fn explore(&mut self, state: &GameState) -> Result<Result<Subtree, OutOfBudget>, StrategyError> {
        if state.is_terminal() {
            return Ok(Ok(Subtree { min: 0, max: 0, worst: Vec::new(), branches: 1 }));
        }
        let positional = self.lister.is_positional() && !state.transcript().is_empty();
        if positional {
            if let Some(t) = self.memo.get(&state.remaining()) {
                return Ok(Ok(t.clone()));
            }
        }
        if self.positions >= self.budget {
            return Ok(Err(OutOfBudget));
        }
        self.positions += 1;
        let m = self.lister.mark(state)?;
        let replies = state.legal_painter_replies(m).map_err(|e| illegal(&self.lister.name(), e, state))?;
        let mut acc: Option<Subtree> = None;
        for d in replies {
            let next = state.apply_move(m, d).expect("enumerated replies are legal");
            let sub = match self.explore(&next)? {
                Ok(sub) => sub,
                Err(e) => return Ok(Err(e)),
            };
            acc = Some(merge(acc, m, d, sub));
        }
        let t = acc.expect("nonempty marks have replies");
        if positional {
            self.memo.insert(state.remaining(), t.clone());
        }
        Ok(Ok(t))
    }
}

fn merge(acc: Option<Subtree>, m: VertexSet, d: VertexSet, sub: Subtree) -> Subtree {
    let size = m.len();
    let mut worst = vec![Move { marked: m, deleted: d }];
    worst.extend(sub.worst.iter().copied());
    let here = Subtree { min: size + sub.min, max: size + sub.max, worst, branches: sub.branches };
    match acc {
        None => here,
        Some(a) => Subtree {
            min: a.min.min(here.min),
            max: a.max.max(here.max),
            worst: if here.min < a.min { here.worst } else { a.worst },
            branches: a.branches + here.branches,
        },
    }
}

/// Plays `lister` against every Painter reply sequence on `g`, expanding at
/// most `budget` positions.
pub fn adversarial_sweep(g: &Graph, lister: &dyn ListerStrategy, budget: usize) -> Result<SweepReport, StrategyError> {
    let root = GameState::new(Arc::new(g.clone()));
    let mut sweep = Sweep { lister, budget, positions: 0, memo: HashMap::new() };
    if root.is_terminal() {
        return Ok(SweepReport {
            lister: lister.name(),
            min_score: 0,
            max_score: 0,
            worst_line: Vec::new(),
            branches: 1,
            positions: 0,
            max_first_reply: 0,
            coverage: 1.0,
            complete: true,
        });
    }
    let m = lister.mark(&root)?;
    let replies = root.legal_painter_replies(m).map_err(|e| illegal(&lister.name(), e, &root))?;
    let max_first_reply = replies.iter().map(|d| d.len()).max().unwrap_or(0);
    sweep.positions = 1;
    let total = replies.len();
    let mut done = 0;
    let mut acc: Option<Subtree> = None;
    for d in replies {
        let next = root.apply_move(m, d).expect("enumerated replies are legal");
        match sweep.explore(&next)? {
            Ok(sub) => {
                acc = Some(merge(acc, m, d, sub));
                done += 1;
            }
            Err(OutOfBudget) => break,
        }
    }
    let t = acc.unwrap_or(Subtree { min: 0, max: 0, worst: Vec::new(), branches: 0 });
    Ok(SweepReport {
        lister: lister.name(),
        min_score: t.min,
        max_score: t.max,
        worst_line: t.worst,
        branches: t.branches,
        positions: sweep.positions,
        max_first_reply,
        coverage: done as f64 / total as f64,
        complete: done == total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::find_perfect_matching;
    use crate::library;
    use crate::solver::solve;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    fn exact_pair(g: &Graph) -> (ExactLister, ExactPainter) {
        let solver = shared_solver(g, SolveOptions::default()).unwrap();
        (lister_exact(Arc::clone(&solver)), painter_exact(solver))
    }

    #[test]
    fn openings() {
        let prism = library::prism();
        let m = Matching::new(&prism, library::prism_matching()).unwrap();
        // labels 1,4,2,5
        assert_eq!(lister_3k_opening(&prism, &m, 1).unwrap(), set(&[0, 3, 1, 4]));
        assert!(matches!(lister_3k_opening(&prism, &m, 2), Err(StrategyError::TooSmall { n: 6, k: 2 })));
        let k4 = library::complete(4);
        let m = Matching::new(&k4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(lister_3k_opening(&k4, &m, 1).unwrap(), k4.vertices());
        let partial = Matching::new(&k4, [(0, 1)]).unwrap();
        assert!(matches!(lister_3k_opening(&k4, &partial, 1), Err(StrategyError::MatchingNotPerfect)));
    }

    #[test]
    fn greedy_replies() {
        let p3 = GameState::new(Arc::new(library::path(3)));
        assert_eq!(painter_greedy(&p3, set(&[0, 1, 2])).unwrap(), set(&[0, 2]));
        let e = GameState::new(Arc::new(Graph::empty(4)));
        assert_eq!(painter_greedy(&e, set(&[1, 2, 3])).unwrap(), set(&[1, 2, 3]));
        let k5 = GameState::new(Arc::new(library::complete(5)));
        assert_eq!(painter_greedy(&k5, set(&[2, 3, 4])).unwrap(), set(&[2]));
    }

    #[test]
    fn exact_matches_reach_the_game_value() {
        for g in [library::prism(), library::path(5), Graph::empty(4), library::cycle(5), library::star(5)] {
            let (l, p) = exact_pair(&g);
            let value = solve(&g, &SolveOptions::default()).unwrap().value as usize;
            let out = play_match(&g, &l, &p, Some(Claim::lister(value))).unwrap();
            assert_eq!(out.score, value);
            assert!(out.bound_met);
            assert_eq!(out.transcript.replay().unwrap().score(), value);
        }
        let e3 = Graph::empty(3);
        let (l, p) = exact_pair(&e3);
        let out = play_match(&e3, &l, &p, Some(Claim::lister(4))).unwrap();
        assert_eq!((out.score, out.bound_met), (3, false));
        let out = play_match(&e3, &l, &p, Some(Claim::painter(3))).unwrap();
        assert!(out.bound_met);
    }

    #[test]
    fn three_k_lister_against_single_painters() {
        let g = library::prism();
        let m = Matching::new(&g, library::prism_matching()).unwrap();
        let solver = shared_solver(&g, SolveOptions::default()).unwrap();
        let lister = lister_3k_strategy(&g, &m, 1, Arc::clone(&solver)).unwrap();
        for painter in [&painter_exact(Arc::clone(&solver)) as &dyn PainterStrategy, &GreedyPainter] {
            let out = play_match(&g, &lister, painter, Some(Claim::lister(10))).unwrap();
            assert!(out.bound_met, "{} scored {}", painter.name(), out.score);
            assert_eq!(out.transcript.moves[0].marked, lister.opening());
        }
        let other = shared_solver(&library::cube(), SolveOptions::default()).unwrap();
        assert!(matches!(lister_3k_strategy(&g, &m, 1, other), Err(StrategyError::WrongGraph)));
    }

    /// Same decisions, but hides positionality so the sweep walks every line.
    struct Unshared<'a>(&'a dyn ListerStrategy);

    impl ListerStrategy for Unshared<'_> {
        fn name(&self) -> String {
            self.0.name()
        }
        fn mark(&self, state: &GameState) -> Result<VertexSet, StrategyError> {
            self.0.mark(state)
        }
    }

    #[test]
    fn sweeps() {
        for g in [library::prism(), library::complete(4)] {
            let m = find_perfect_matching(&g).unwrap();
            let solver = shared_solver(&g, SolveOptions::default()).unwrap();
            let lister = lister_3k_strategy(&g, &m, 1, solver).unwrap();
            let shared = adversarial_sweep(&g, &lister, 100_000).unwrap();
            let full = adversarial_sweep(&g, &Unshared(&lister), 100_000).unwrap();
            assert!(shared.complete && full.complete);
            assert_eq!(shared.coverage, 1.0);
            assert_eq!((shared.min_score, shared.max_score, shared.branches), (full.min_score, full.max_score, full.branches));
            assert!(shared.min_score > 3 * g.n() / 2);
            assert!(shared.max_first_reply <= 2);
            assert_eq!(shared.worst_line.iter().map(|mv| mv.marked.len()).sum::<usize>(), shared.min_score);
        }
    }

    #[test]
    fn sweep_budget_reports_partial_coverage() {
        let g = library::cube();
        let r = adversarial_sweep(&g, &GreedyLister, 2).unwrap();
        assert!(!r.complete);
        assert!(r.coverage < 1.0);
    }
}
