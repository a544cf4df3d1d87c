//! Exact game values by memoized minimax over remaining-vertex sets.
//!
//! `val(R) = 0` for empty `R`, otherwise the maximum over nonempty marks
//! `M ⊆ R` of `|M| + min { val(R \ D) : D maximal independent in G[M] }`.
//!
//! Two cuts keep the search exact:
//! * `val` is monotone under taking induced subgraphs, so every reply `D`
//!   (which contains some `v ∈ M`) leaves at most `val(R \ {v})`. A mark
//!   with `|M| + max_{v∈M} val(R \ {v})` not above the incumbent is skipped.
//! * Painter's loop stops as soon as one reply holds the mark to the
//!   incumbent.
//!
//! Components are solved separately and summed unless `additive` is off.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{components, maximal_independent_subsets, Graph};
use crate::set::VertexSet;

pub const DEFAULT_CAP: usize = 14;
/// Above this many vertices a solve is allowed but logged as likely infeasible.
pub const COMFORT_CAP: usize = 16;
/// Dense memo tables are used up to this many vertices.
const DENSE_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph has {n} vertices, above the solver cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("timed out after {elapsed_ms} ms with {states_memoized} states solved; no value reported")]
    Timeout { elapsed_ms: u128, states_memoized: usize },
    #[error("illegal position: {0}")]
    IllegalPosition(String),
    #[error("memo cache rejected: {0}")]
    Cache(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub cap: usize,
    #[serde(with = "opt_millis")]
    pub timeout: Option<Duration>,
    /// Split into connected components inside the recursion.
    pub additive: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { cap: DEFAULT_CAP, timeout: None, additive: true }
    }
}

impl SolveOptions {
    /// No component decomposition, for auditing.
    pub fn strict() -> Self {
        SolveOptions { additive: false, ..Self::default() }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }
}

mod opt_millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&(d.as_millis() as u64)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<u64>::deserialize(d)?.map(Duration::from_millis))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub states_memoized: usize,
    pub nodes_expanded: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub value: u32,
    pub best_opening: VertexSet,
    pub stats: SolveStats,
}

/// Keyed storage over vertex sets: a flat array for small graphs,
/// a hash map otherwise.
#[derive(Clone, Debug)]
enum SetMap<T> {
    Dense(Vec<Option<T>>),
    Sparse(HashMap<VertexSet, T>),
}

impl<T: Clone> SetMap<T> {
    fn for_graph(n: usize) -> Self {
        if n <= DENSE_LIMIT {
            SetMap::Dense(vec![None; 1 << n])
        } else {
            SetMap::Sparse(HashMap::new())
        }
    }

    fn get(&self, key: VertexSet) -> Option<&T> {
        match self {
            SetMap::Dense(v) => v[key.bits() as usize].as_ref(),
            SetMap::Sparse(m) => m.get(&key),
        }
    }

    fn insert(&mut self, key: VertexSet, value: T) {
        match self {
            SetMap::Dense(v) => v[key.bits() as usize] = Some(value),
            SetMap::Sparse(m) => {
                m.insert(key, value);
            }
        }
    }
}

/// Exact subgame values for one fixed graph; `val(∅) = 0` is implicit.
#[derive(Clone, Debug)]
pub struct MemoTable {
    graph_hash: String,
    values: SetMap<u32>,
    len: usize,
}

#[derive(Serialize, Deserialize)]
struct MemoFile {
    version: u32,
    graph_hash: String,
    entries: Vec<(u64, u32)>,
}

const MEMO_FILE_VERSION: u32 = 1;

impl MemoTable {
    pub fn new(g: &Graph) -> Self {
        MemoTable { graph_hash: g.content_hash(), values: SetMap::for_graph(g.n()), len: 0 }
    }

    pub fn get(&self, remaining: VertexSet) -> Option<u32> {
        if remaining.is_empty() {
            return Some(0);
        }
        self.values.get(remaining).copied()
    }

    fn insert(&mut self, remaining: VertexSet, value: u32) {
        if self.values.get(remaining).is_none() {
            self.len += 1;
        }
        self.values.insert(remaining, value);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn graph_hash(&self) -> &str {
        &self.graph_hash
    }

    fn entries(&self) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = match &self.values {
            SetMap::Dense(v) => {
                v.iter().enumerate().filter_map(|(i, x)| x.map(|x| (i as u64, x))).collect()
            }
            SetMap::Sparse(m) => m.iter().map(|(k, &x)| (k.bits(), x)).collect(),
        };
        out.sort_unstable();
        out
    }

    /// Versioned JSON cache file, keyed by the graph's content hash.
    pub fn to_json(&self) -> String {
        let file = MemoFile {
            version: MEMO_FILE_VERSION,
            graph_hash: self.graph_hash.clone(),
            entries: self.entries(),
        };
        serde_json::to_string(&file).expect("memo serializes")
    }

    /// Loads a cache file, refusing it unless it was written for `g`.
    pub fn from_json(g: &Graph, text: &str) -> Result<MemoTable, SolveError> {
        let file: MemoFile = serde_json::from_str(text).map_err(|e| SolveError::Cache(e.to_string()))?;
        if file.version != MEMO_FILE_VERSION {
            return Err(SolveError::Cache(format!("unsupported version {}", file.version)));
        }
        let mut table = MemoTable::new(g);
        if file.graph_hash != table.graph_hash {
            return Err(SolveError::Cache("graph hash mismatch".into()));
        }
        let all = g.vertices().bits();
        for (mask, value) in file.entries {
            if mask & !all != 0 || mask == 0 {
                return Err(SolveError::Cache(format!("entry {mask:#x} outside the vertex set")));
            }
            table.insert(VertexSet(mask), value);
        }
        Ok(table)
    }
}

/// A solver bound to one graph, keeping its memo across queries.
pub struct Solver {
    graph: Arc<Graph>,
    opts: SolveOptions,
    memo: MemoTable,
    /// Painter replies per mark, largest first.
    replies: SetMap<Arc<[VertexSet]>>,
    nodes: u64,
    deadline: Option<Instant>,
    started: Instant,
}

impl Solver {
    pub fn new(graph: Arc<Graph>, opts: SolveOptions) -> Result<Solver, SolveError> {
        let n = graph.n();
        let cap = opts.cap.min(crate::set::MAX_VERTICES);
        if n > cap {
            return Err(SolveError::CapExceeded { n, cap });
        }
        if n > COMFORT_CAP {
            log::warn!("exact solve on {n} vertices; expect exponential cost");
        }
        Ok(Solver {
            memo: MemoTable::new(&graph),
            replies: SetMap::for_graph(n.min(16)),
            graph,
            opts,
            nodes: 0,
            deadline: None,
            started: Instant::now(),
        })
    }

    pub fn for_graph(g: &Graph, opts: SolveOptions) -> Result<Solver, SolveError> {
        Solver::new(Arc::new(g.clone()), opts)
    }

    /// Seeds the memo from a previously saved table for the same graph.
    pub fn with_memo(mut self, memo: MemoTable) -> Result<Solver, SolveError> {
        if memo.graph_hash != self.memo.graph_hash {
            return Err(SolveError::Cache("graph hash mismatch".into()));
        }
        self.memo = memo;
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }

    pub fn memo(&self) -> &MemoTable {
        &self.memo
    }

    pub fn stats(&self) -> SolveStats {
        SolveStats {
            states_memoized: self.memo.len(),
            nodes_expanded: self.nodes,
            elapsed: self.started.elapsed(),
        }
    }

    fn begin(&mut self) {
        self.started = Instant::now();
        self.deadline = self.opts.timeout.map(|t| self.started + t);
    }

    /// `val(remaining)`.
    pub fn value(&mut self, remaining: VertexSet) -> Result<u32, SolveError> {
        if !remaining.is_subset(self.graph.vertices()) {
            return Err(SolveError::IllegalPosition(format!("{remaining} is not a vertex subset")));
        }
        self.begin();
        self.eval(remaining)
    }

    /// Cached value, if this subgame has already been solved.
    pub fn cached_value(&self, remaining: VertexSet) -> Option<u32> {
        self.memo.get(remaining)
    }

    fn replies_for(&mut self, m: VertexSet) -> Arc<[VertexSet]> {
        if self.graph.n() <= 16 {
            if let Some(r) = self.replies.get(m) {
                return Arc::clone(r);
            }
        }
        let mut list = maximal_independent_subsets(&self.graph, m).expect("marks are nonempty");
        list.sort_by_key(|d| (std::cmp::Reverse(d.len()), *d));
        let list: Arc<[VertexSet]> = list.into();
        if self.graph.n() <= 16 {
            self.replies.insert(m, Arc::clone(&list));
        }
        list
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(SolveError::Timeout {
                        elapsed_ms: self.started.elapsed().as_millis(),
                        states_memoized: self.memo.len(),
                    });
                }
            }
        }
        Ok(())
    }

    fn eval(&mut self, r: VertexSet) -> Result<u32, SolveError> {
        if let Some(v) = self.memo.get(r) {
            return Ok(v);
        }
        self.tick()?;

        if self.opts.additive {
            let comps = components(&self.graph, r);
            if comps.len() > 1 {
                let mut total = 0;
                for c in comps {
                    total += self.eval(c)?;
                }
                self.memo.insert(r, total);
                return Ok(total);
            }
        }

        // singleton marks: exact values and the per-vertex continuation bound
        let mut without = [0u32; crate::set::MAX_VERTICES];
        let mut best = 0;
        for v in r {
            let rest = self.eval(r.without(v))?;
            without[v] = rest;
            best = best.max(1 + rest);
        }

        let mut marks: Vec<VertexSet> = r.subsets().filter(|m| m.len() >= 2).collect();
        marks.sort_unstable_by_key(|m| (std::cmp::Reverse(m.len()), *m));
        for m in marks {
            let size = m.len() as u32;
            let optimistic = size + m.iter().map(|v| without[v]).max().unwrap_or(0);
            if optimistic <= best {
                continue;
            }
            let mut worst = u32::MAX;
            for &d in self.replies_for(m).iter() {
                let cont = self.eval(r.difference(d))?;
                worst = worst.min(cont);
                if size + worst <= best {
                    break;
                }
            }
            best = best.max(size + worst);
        }
        self.memo.insert(r, best);
        Ok(best)
    }

    /// Worst-case payoff of mark `m` at `r`, or `None` once it is known
    /// to fall below `target`.
    fn mark_payoff(&mut self, r: VertexSet, m: VertexSet, target: u32) -> Result<Option<u32>, SolveError> {
        let size = m.len() as u32;
        let mut worst = u32::MAX;
        for &d in self.replies_for(m).iter() {
            worst = worst.min(size + self.eval(r.difference(d))?);
            if worst < target {
                return Ok(None);
            }
        }
        Ok(Some(worst))
    }

    /// An optimal mark at `remaining`; ties go to the smallest mask.
    pub fn optimal_lister_move(&mut self, remaining: VertexSet) -> Result<VertexSet, SolveError> {
        if remaining.is_empty() {
            return Err(SolveError::IllegalPosition("no vertices remain".into()));
        }
        let target = self.value(remaining)?;
        for m in remaining.subsets().skip(1) {
            if let Some(payoff) = self.mark_payoff(remaining, m, target)? {
                debug_assert_eq!(payoff, target);
                return Ok(m);
            }
        }
        unreachable!("the game value is attained by some mark")
    }

    /// Painter's best reply to `m` and the total `|m| + val(remaining \ D)`;
    /// ties go to the smallest mask.
    pub fn optimal_painter_reply(
        &mut self,
        remaining: VertexSet,
        m: VertexSet,
    ) -> Result<(VertexSet, u32), SolveError> {
        if m.is_empty() || !m.is_subset(remaining) || !remaining.is_subset(self.graph.vertices()) {
            return Err(SolveError::IllegalPosition(format!("mark {m} is not a nonempty subset of {remaining}")));
        }
        self.begin();
        let mut replies = self.replies_for(m).to_vec();
        replies.sort_unstable();
        let mut best: Option<(VertexSet, u32)> = None;
        for d in replies {
            let total = m.len() as u32 + self.eval(remaining.difference(d))?;
            if best.is_none_or(|(_, b)| total < b) {
                best = Some((d, total));
            }
        }
        Ok(best.expect("every nonempty mark has a reply"))
    }

    /// Value plus an optimal opening for the whole graph.
    pub fn solve(&mut self) -> Result<SolveResult, SolveError> {
        let start = Instant::now();
        let all = self.graph.vertices();
        let value = self.value(all)?;
        let best_opening = self.optimal_lister_move(all)?;
        let mut stats = self.stats();
        stats.elapsed = start.elapsed();
        Ok(SolveResult { value, best_opening, stats })
    }
}

/// `s̊(g)` with an optimal opening.
pub fn solve(g: &Graph, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    Solver::for_graph(g, opts.clone())?.solve()
}

/// Solves each connected component on its own and sums the values.
///
/// An optimal opening of any single component, played with the other
/// components untouched, is optimal for the union; the first component's
/// opening is reported.
pub fn solve_additive(g: &Graph, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let n = g.n();
    if n > opts.cap {
        return Err(SolveError::CapExceeded { n, cap: opts.cap });
    }
    let started = Instant::now();
    let mut value = 0;
    let mut best_opening = None;
    let mut stats = SolveStats::default();
    for comp in components(g, g.vertices()) {
        let order = comp.to_vec();
        let sub = g.induced_reindexed(comp);
        let result = solve(&sub, opts)?;
        value += result.value;
        stats.states_memoized += result.stats.states_memoized;
        stats.nodes_expanded += result.stats.nodes_expanded;
        if best_opening.is_none() {
            best_opening = Some(result.best_opening.iter().map(|i| order[i]).collect());
        }
    }
    stats.elapsed = started.elapsed();
    Ok(SolveResult { value, best_opening: best_opening.expect("graphs have a vertex"), stats })
}

/// `⌊3n/2⌋`, the value of the n-vertex path.
pub fn closed_form_path(n: usize) -> u32 {
    (3 * n / 2) as u32
}

/// `n(n+1)/2`, the value of the complete graph (Painter deletes one vertex per round).
pub fn closed_form_complete(n: usize) -> u32 {
    (n * (n + 1) / 2) as u32
}

/// Readings of the star-value index `u_r` over triangular numbers
/// `t_k = k(k+1)/2`. The literal "max{k : t_k ≥ r}" is unbounded, so one
/// of these monotone readings has to stand in for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarIndexRule {
    /// `min{k : t_k ≥ r}`
    LeastTriangularAtLeast,
    /// `max{k : t_k ≤ r}`
    GreatestTriangularAtMost,
}

impl StarIndexRule {
    pub const ALL: [StarIndexRule; 2] =
        [StarIndexRule::LeastTriangularAtLeast, StarIndexRule::GreatestTriangularAtMost];

    pub fn describe(self) -> &'static str {
        match self {
            StarIndexRule::LeastTriangularAtLeast => "u_r = min{k : k(k+1)/2 >= r}",
            StarIndexRule::GreatestTriangularAtMost => "u_r = max{k : k(k+1)/2 <= r}",
        }
    }

    pub fn index(self, r: usize) -> usize {
        let tri = |k: usize| k * (k + 1) / 2;
        match self {
            StarIndexRule::LeastTriangularAtLeast => (0..).find(|&k| tri(k) >= r).expect("unbounded"),
            StarIndexRule::GreatestTriangularAtMost => {
                (0..).take_while(|&k| tri(k) <= r).last().expect("t_0 = 0 <= r")
            }
        }
    }
}

/// The reading that matches the exact solver on K_{1,n-1} for n = 2..=9
/// (pinned by the star oracle tests and the acceptance suite).
pub const PINNED_STAR_RULE: StarIndexRule = StarIndexRule::GreatestTriangularAtMost;

/// `n + u_{n-1}` under `rule`.
pub fn closed_form_star_with(n: usize, rule: StarIndexRule) -> u32 {
    assert!(n >= 2, "stars need at least two vertices");
    (n + rule.index(n - 1)) as u32
}

/// Value of the n-vertex star K_{1,n-1}.
pub fn closed_form_star(n: usize) -> u32 {
    closed_form_star_with(n, PINNED_STAR_RULE)
}
