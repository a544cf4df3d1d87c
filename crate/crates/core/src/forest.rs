//! Spanning forests with all degrees in {1,3}.
//!
//! After Painter deletes `D`, each survivor whose matching partner was
//! deleted is a β-vertex. The surviving matching edges `F0` cover every
//! other survivor once. Joining the β-vertices in pairs by vertex-disjoint
//! paths `P` and taking `F1 = F0 ⊕ E(P)` makes every degree odd and at most
//! 3. Removing whole cycles keeps every degree odd, leaving a forest.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::{Matching, PathSystem};
use crate::graph::{find_cycle, is_independent, Graph};
use crate::set::{EdgeSet, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("D not independent")]
    NotIndependent,
    #[error("matching not perfect")]
    MatchingNotPerfect,
    #[error("deleted set {0} is not a vertex subset")]
    OutOfRange(VertexSet),
    #[error("odd number of beta-vertices ({0}) cannot be split evenly")]
    OddSplit(usize),
    #[error("path endpoints not in D' split: {0}")]
    EndpointsNotSplit(String),
    #[error("paths not vertex-disjoint: {0}")]
    PathsNotDisjoint(String),
    #[error("instance too large for exhaustive forest search ({n} vertices, {m} edges)")]
    TooLarge { n: usize, m: usize },
}

/// The position after Painter's deletion, seen through the matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaContext {
    #[serde(skip)]
    pub graph: Graph,
    /// Vertices of G⁻ = G − D.
    pub alive: VertexSet,
    pub deleted: VertexSet,
    /// Survivors matched to a deleted vertex.
    pub betas: VertexSet,
    /// Matching edges with both ends alive.
    pub surviving_matching: EdgeSet,
}

pub fn beta_context(g: &Graph, matching: &Matching, d: VertexSet) -> Result<BetaContext, ForestError> {
    if !d.is_subset(g.vertices()) {
        return Err(ForestError::OutOfRange(d));
    }
    if !matching.is_perfect_for(g) {
        return Err(ForestError::MatchingNotPerfect);
    }
    if !is_independent(g, d) {
        return Err(ForestError::NotIndependent);
    }
    let betas: VertexSet = d.iter().map(|v| matching.partner(v).expect("perfect matching")).collect();
    let surviving_matching =
        matching.edges().iter().filter(|&(u, v)| !d.contains(u) && !d.contains(v)).collect();
    let ctx = BetaContext {
        graph: g.clone(),
        alive: g.vertices().difference(d),
        deleted: d,
        betas,
        surviving_matching,
    };
    debug_assert_eq!(ctx.betas.len(), d.len());
    Ok(ctx)
}

impl BetaContext {
    /// Drops one β-vertex from G⁻; its remaining β-vertices and matching
    /// edges are unchanged.
    pub fn without_beta(&self, v: usize) -> BetaContext {
        assert!(self.betas.contains(v), "only beta-vertices can be split off");
        BetaContext {
            graph: self.graph.clone(),
            alive: self.alive.without(v),
            deleted: self.deleted,
            betas: self.betas.without(v),
            surviving_matching: self.surviving_matching.clone(),
        }
    }
}

/// Even split of the β-vertices: the lower-index half goes to the sources.
pub fn split_betas(betas: VertexSet) -> Result<(VertexSet, VertexSet), ForestError> {
    if betas.len() % 2 == 1 {
        return Err(ForestError::OddSplit(betas.len()));
    }
    let a = betas.lowest(betas.len() / 2).expect("half of the members exist");
    Ok((a, betas.difference(a)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForestMode {
    /// Every vertex has degree 1 or 3.
    Strict,
    /// One vertex of degree 0 or 6, all others 1 or 3 (odd vertex counts).
    OddException,
}

/// An edge set claimed to be a spanning forest of `ambient` with degrees
/// in {1,3} (or the odd exception). [`ForestCertificate::check`] verifies
/// the claim from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestCertificate {
    pub edges: EdgeSet,
    pub degrees: BTreeMap<usize, usize>,
    pub mode: ForestMode,
}

impl ForestCertificate {
    pub fn new(edges: EdgeSet, ambient: VertexSet, mode: ForestMode) -> Self {
        let degrees = ambient.iter().map(|v| (v, edges.degree(v))).collect();
        ForestCertificate { edges, degrees, mode }
    }

    pub fn ambient(&self) -> VertexSet {
        self.degrees.keys().collect()
    }

    /// Independent validation against the ambient graph.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        let ambient = self.ambient();
        for (u, v) in self.edges.iter() {
            if !ambient.contains(u) || !ambient.contains(v) || !g.adjacent(u, v) {
                return Err(format!("{u}-{v} is not an edge of the ambient graph"));
            }
        }
        let degrees = self.edges.degrees(g.n());
        for (&v, &claimed) in &self.degrees {
            if degrees[v] != claimed {
                return Err(format!("vertex {v}: claimed degree {claimed}, actual {}", degrees[v]));
            }
        }
        if let Some(c) = find_cycle(g, &self.edges) {
            return Err(format!("cycle {c:?}"));
        }
        let odd_one_out: Vec<usize> =
            self.degrees.iter().filter(|(_, &d)| d != 1 && d != 3).map(|(&v, _)| v).collect();
        match (self.mode, odd_one_out.as_slice()) {
            (ForestMode::Strict, []) => Ok(()),
            (ForestMode::OddException, [v]) if matches!(self.degrees[v], 0 | 6) && ambient.len() % 2 == 1 => {
                Ok(())
            }
            (ForestMode::OddException, []) => Err("no exceptional vertex in an odd-exception certificate".into()),
            _ => Err(format!("vertices {odd_one_out:?} have degrees outside the allowed set")),
        }
    }
}

/// Trace of the symmetric-difference construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestConstruction {
    /// `F0 ⊕ E(P)` before cycle stripping.
    pub combined: EdgeSet,
    /// Cycles removed, in order.
    pub stripped_cycles: Vec<Vec<usize>>,
    pub certificate: ForestCertificate,
}

/// Removes whole cycles (smallest-vertex-first search) until acyclic.
pub fn strip_cycles(g: &Graph, edges: &EdgeSet) -> (EdgeSet, Vec<Vec<usize>>) {
    let mut current = edges.clone();
    let mut removed = Vec::new();
    while let Some(cycle) = find_cycle(g, &current) {
        for i in 0..cycle.len() {
            current.remove(cycle[i], cycle[(i + 1) % cycle.len()]);
        }
        removed.push(cycle);
    }
    (current, removed)
}

pub fn build_forest_traced(ctx: &BetaContext, paths: &PathSystem) -> Result<ForestConstruction, ForestError> {
    if paths.sources.union(paths.sinks) != ctx.betas
        || !paths.sources.is_disjoint(paths.sinks)
        || paths.sources.len() != paths.sinks.len()
        || paths.paths.len() != paths.sources.len()
    {
        return Err(ForestError::EndpointsNotSplit(format!(
            "sources {} and sinks {} against beta-vertices {}",
            paths.sources, paths.sinks, ctx.betas
        )));
    }
    paths.validate(&ctx.graph, ctx.alive).map_err(ForestError::PathsNotDisjoint)?;
    // every sink must be reached by exactly one path
    let ends: VertexSet = paths.paths.iter().filter_map(|p| p.last().copied()).collect();
    if ends != paths.sinks {
        return Err(ForestError::EndpointsNotSplit(format!("paths end at {ends}, sinks are {}", paths.sinks)));
    }

    let combined = ctx.surviving_matching.symmetric_difference(&paths.edges());
    let (edges, stripped_cycles) = strip_cycles(&ctx.graph, &combined);
    let certificate = ForestCertificate::new(edges, ctx.alive, ForestMode::Strict);
    Ok(ForestConstruction { combined, stripped_cycles, certificate })
}

pub fn build_forest(ctx: &BetaContext, paths: &PathSystem) -> Result<ForestCertificate, ForestError> {
    build_forest_traced(ctx, paths).map(|c| c.certificate)
}

/// Size limits for the exhaustive search.
pub const FOREST_SEARCH_MAX_VERTICES: usize = 12;
pub const FOREST_SEARCH_MAX_EDGES: usize = 24;

/// A spanning forest of `g` with degrees in {1,3}; with
/// `allow_odd_exception` and odd `n`, one vertex may instead have degree 0 or 6.
pub fn spanning_forest_13_exists(
    g: &Graph,
    allow_odd_exception: bool,
) -> Result<Option<ForestCertificate>, ForestError> {
    let edges: Vec<(usize, usize)> = g.edges().to_vec();
    if g.n() > FOREST_SEARCH_MAX_VERTICES || edges.len() > FOREST_SEARCH_MAX_EDGES {
        return Err(ForestError::TooLarge { n: g.n(), m: edges.len() });
    }
    let n = g.n();
    if n.is_multiple_of(2) {
        return Ok(search(g, &edges, None).map(|e| ForestCertificate::new(e, g.vertices(), ForestMode::Strict)));
    }
    // an odd count of odd degrees is impossible, so odd n needs the exception
    if !allow_odd_exception {
        return Ok(None);
    }
    for special in 0..n {
        if let Some(e) = search(g, &edges, Some(special)) {
            return Ok(Some(ForestCertificate::new(e, g.vertices(), ForestMode::OddException)));
        }
    }
    Ok(None)
}

struct Search<'a> {
    edges: &'a [(usize, usize)],
    special: Option<usize>,
    /// Undecided incident edges per vertex.
    open: Vec<usize>,
    degree: Vec<usize>,
    parent: Vec<usize>,
    chosen: Vec<bool>,
}

impl Search<'_> {
    fn allowed(&self, v: usize) -> &'static [usize] {
        if self.special == Some(v) {
            &[0, 6]
        } else {
            &[1, 3]
        }
    }

    fn feasible(&self, v: usize) -> bool {
        let (d, r) = (self.degree[v], self.open[v]);
        self.allowed(v).iter().any(|&t| d <= t && t <= d + r)
    }

    fn root(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn go(&mut self, i: usize) -> bool {
        if i == self.edges.len() {
            return (0..self.degree.len()).all(|v| self.allowed(v).contains(&self.degree[v]));
        }
        let (u, v) = self.edges[i];
        self.open[u] -= 1;
        self.open[v] -= 1;
        let (ru, rv) = (self.root(u), self.root(v));
        if ru != rv {
            self.degree[u] += 1;
            self.degree[v] += 1;
            self.parent[ru] = rv;
            self.chosen[i] = true;
            if self.feasible(u) && self.feasible(v) && self.go(i + 1) {
                return true;
            }
            self.chosen[i] = false;
            self.parent[ru] = ru;
            self.degree[u] -= 1;
            self.degree[v] -= 1;
        }
        if self.feasible(u) && self.feasible(v) && self.go(i + 1) {
            return true;
        }
        self.open[u] += 1;
        self.open[v] += 1;
        false
    }
}

fn search(g: &Graph, edges: &[(usize, usize)], special: Option<usize>) -> Option<EdgeSet> {
    let n = g.n();
    let mut s = Search {
        edges,
        special,
        open: (0..n).map(|v| g.degree(v)).collect(),
        degree: vec![0; n],
        parent: (0..n).collect(),
        chosen: vec![false; edges.len()],
    };
    if !(0..n).all(|v| s.feasible(v)) {
        return None;
    }
    s.go(0).then(|| edges.iter().zip(&s.chosen).filter(|(_, &c)| c).map(|(&e, _)| e).collect())
}
