//! Perfect matchings, vertex connectivity and vertex-disjoint path systems.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{components, is_connected_within, Graph};
use crate::set::{Edge, EdgeSet, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConnectivityError {
    #[error("insufficient connectivity: found {found} disjoint paths, needed {needed}")]
    InsufficientConnectivity { found: usize, needed: usize },
    #[error("invalid path request: {0}")]
    InvalidRequest(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    edges: EdgeSet,
    covered: VertexSet,
}

impl Matching {
    pub fn new(g: &Graph, pairs: impl IntoIterator<Item = Edge>) -> Result<Matching, ConnectivityError> {
        let mut edges = EdgeSet::new();
        let mut covered = VertexSet::EMPTY;
        for (u, v) in pairs {
            if u >= g.n() || v >= g.n() || !g.adjacent(u, v) {
                return Err(ConnectivityError::InvalidMatching(format!("{u}-{v} is not an edge")));
            }
            if covered.contains(u) || covered.contains(v) {
                return Err(ConnectivityError::InvalidMatching(format!("{u}-{v} shares a vertex")));
            }
            covered = covered.with(u).with(v);
            edges.insert(u, v);
        }
        Ok(Matching { edges, covered })
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn covered(&self) -> VertexSet {
        self.covered
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_perfect_for(&self, g: &Graph) -> bool {
        self.covered == g.vertices()
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.edges.iter().find_map(|(a, b)| match (a == v, b == v) {
            (true, _) => Some(b),
            (_, true) => Some(a),
            _ => None,
        })
    }

    /// Matching pairs ordered by their smaller endpoint.
    pub fn pairs(&self) -> Vec<Edge> {
        self.edges.to_vec()
    }
}

impl Serialize for Matching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            matching: &'a EdgeSet,
        }
        Wire { matching: &self.edges }.serialize(s)
    }
}

pub fn find_perfect_matching(g: &Graph) -> Option<Matching> {
    find_perfect_matching_within(g, g.vertices())
}

/// Perfect matching of the subgraph induced by `within`, by backtracking on
/// the lowest uncovered vertex with a memo of uncovered sets known to fail.
pub fn find_perfect_matching_within(g: &Graph, within: VertexSet) -> Option<Matching> {
    fn go(g: &Graph, open: VertexSet, failed: &mut HashSet<VertexSet>, acc: &mut Vec<Edge>) -> bool {
        let Some(v) = open.first() else { return true };
        if failed.contains(&open) {
            return false;
        }
        if components(g, open).iter().any(|c| c.len() % 2 == 1) {
            failed.insert(open);
            return false;
        }
        for u in g.neighbors(v).intersection(open) {
            acc.push((v, u));
            if go(g, open.without(v).without(u), failed, acc) {
                return true;
            }
            acc.pop();
        }
        failed.insert(open);
        false
    }
    let mut acc = Vec::new();
    if go(g, within, &mut HashSet::new(), &mut acc) {
        Some(Matching::new(g, acc).expect("search only pairs adjacent uncovered vertices"))
    } else {
        None
    }
}

pub fn min_degree(g: &Graph) -> usize {
    min_degree_within(g, g.vertices())
}

/// Minimum degree of the induced subgraph; 0 for the empty set.
pub fn min_degree_within(g: &Graph, within: VertexSet) -> usize {
    within.iter().map(|v| g.degree_within(v, within)).min().unwrap_or(0)
}

/// Residual network with unit-scale integer capacities.
struct FlowNet {
    to: Vec<usize>,
    cap: Vec<i32>,
    out: Vec<Vec<usize>>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet { to: Vec::new(), cap: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, u: usize, v: usize, cap: i32) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.out[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.out[v].push(id + 1);
        id
    }

    /// Edmonds–Karp, stopping once `limit` units have been routed.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit {
            let mut via = vec![usize::MAX; self.out.len()];
            let mut seen = vec![false; self.out.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &e in &self.out[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && !seen[v] {
                        seen[v] = true;
                        via[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

#[inline]
fn node_in(v: usize) -> usize {
    2 * v
}

#[inline]
fn node_out(v: usize) -> usize {
    2 * v + 1
}

/// Vertex-split network over `within`: each vertex not in `uncapped`
/// has an in→out arc of capacity 1. Returns the net and each vertex's
/// outgoing graph arcs keyed by head vertex.
fn split_network(g: &Graph, within: VertexSet, uncapped: VertexSet) -> (FlowNet, Vec<Vec<(usize, usize)>>) {
    let n = g.n();
    let mut net = FlowNet::new(2 * n + 2);
    let mut arcs = vec![Vec::new(); n];
    for v in within {
        let cap = if uncapped.contains(v) { within.len() as i32 } else { 1 };
        net.add(node_in(v), node_out(v), cap);
        for w in g.neighbors(v).intersection(within) {
            let id = net.add(node_out(v), node_in(w), 1);
            arcs[v].push((w, id));
        }
    }
    (net, arcs)
}

/// Maximum number of internally vertex-disjoint s–t paths inside `within`
/// for nonadjacent `s`, `t`, capped at `limit`.
pub fn local_connectivity(g: &Graph, within: VertexSet, s: usize, t: usize, limit: usize) -> usize {
    debug_assert!(!g.adjacent(s, t) && s != t);
    let both = VertexSet::singleton(s).with(t);
    let (mut net, _) = split_network(g, within, both);
    net.max_flow(node_out(s), node_in(t), limit)
}

pub fn vertex_connectivity(g: &Graph) -> usize {
    vertex_connectivity_within(g, g.vertices())
}

/// κ of the induced subgraph (Esfahanian–Hakimi pair selection): with `v`
/// of minimum degree, every minimum cut either separates `v` from a
/// non-neighbor or contains `v` and separates two nonadjacent neighbors.
pub fn vertex_connectivity_within(g: &Graph, within: VertexSet) -> usize {
    let size = within.len();
    if size <= 1 {
        return 0;
    }
    if !is_connected_within(g, within) {
        return 0;
    }
    let v = within
        .iter()
        .min_by_key(|&u| (g.degree_within(u, within), u))
        .expect("nonempty");
    let nv = g.neighbors(v).intersection(within);
    let mut best = nv.len();
    if nv.len() == size - 1 && within.iter().all(|u| g.degree_within(u, within) == size - 1) {
        return size - 1;
    }
    for u in within.difference(nv).without(v) {
        best = best.min(local_connectivity(g, within, v, u, best));
    }
    for x in nv {
        for y in nv.difference(g.neighbors(x)) {
            if y > x {
                best = best.min(local_connectivity(g, within, x, y, best));
            }
        }
    }
    best
}

pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    is_k_connected_within(g, g.vertices(), k)
}

/// More than `k` vertices and no separating set of size below `k`.
pub fn is_k_connected_within(g: &Graph, within: VertexSet, k: usize) -> bool {
    within.len() > k && vertex_connectivity_within(g, within) >= k
}

/// Vertex-disjoint paths from a source set to a sink set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub paths: Vec<Vec<usize>>,
    pub sources: VertexSet,
    pub sinks: VertexSet,
}

impl PathSystem {
    pub fn empty() -> Self {
        PathSystem { paths: Vec::new(), sources: VertexSet::EMPTY, sinks: VertexSet::EMPTY }
    }

    /// Union of the paths' edge sets.
    pub fn edges(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for p in &self.paths {
            for w in p.windows(2) {
                out.insert(w[0], w[1]);
            }
        }
        out
    }

    pub fn vertices(&self) -> VertexSet {
        self.paths.iter().flatten().collect()
    }

    /// Checks every structural invariant against `g` restricted to `within`.
    pub fn validate(&self, g: &Graph, within: VertexSet) -> Result<(), String> {
        let mut used = VertexSet::EMPTY;
        for p in &self.paths {
            let (Some(&first), Some(&last)) = (p.first(), p.last()) else {
                return Err("empty path".into());
            };
            if !self.sources.contains(first) || !self.sinks.contains(last) {
                return Err(format!("path {p:?} does not run from sources to sinks"));
            }
            for &v in p {
                if !within.contains(v) {
                    return Err(format!("vertex {v} outside the allowed set"));
                }
                if used.contains(v) {
                    return Err(format!("vertex {v} used twice"));
                }
                used.insert(v);
            }
            if let Some(w) = p.windows(2).find(|w| !g.adjacent(w[0], w[1])) {
                return Err(format!("{}-{} is not an edge", w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// `count` fully vertex-disjoint paths from `a` to `b` inside `within`.
///
/// Integral max flow on the vertex-split network; endpoints use their own
/// unit capacity. Paths are read off the flow starting from each source
/// in index order.
pub fn disjoint_paths(
    g: &Graph,
    within: VertexSet,
    a: VertexSet,
    b: VertexSet,
    count: usize,
) -> Result<PathSystem, ConnectivityError> {
    if !a.is_disjoint(b) {
        return Err(ConnectivityError::InvalidRequest("source and sink sets overlap".into()));
    }
    if a.len() != count || b.len() != count {
        return Err(ConnectivityError::InvalidRequest(format!(
            "|A| = {}, |B| = {}, count = {count}",
            a.len(),
            b.len()
        )));
    }
    if !a.union(b).is_subset(within) {
        return Err(ConnectivityError::InvalidRequest("endpoints outside the vertex set".into()));
    }
    if count == 0 {
        return Ok(PathSystem::empty());
    }
    let n = g.n();
    let (source, sink) = (2 * n, 2 * n + 1);
    let (mut net, arcs) = split_network(g, within, VertexSet::EMPTY);
    for v in a {
        net.add(source, node_in(v), 1);
    }
    for v in b {
        net.add(node_out(v), sink, 1);
    }
    let found = net.max_flow(source, sink, count);
    if found < count {
        return Err(ConnectivityError::InsufficientConnectivity { found, needed: count });
    }
    // a saturated graph arc has residual 0 on its forward id
    let mut paths = Vec::with_capacity(count);
    for start in a {
        let mut path = vec![start];
        let mut cur = start;
        while !b.contains(cur) {
            let next = arcs[cur]
                .iter()
                .filter(|&&(_, id)| net.cap[id] == 0)
                .map(|&(w, _)| w)
                .min()
                .expect("flow conservation gives every non-sink path vertex an outgoing unit");
            path.push(next);
            cur = next;
        }
        paths.push(path);
    }
    let system = PathSystem { paths, sources: a, sinks: b };
    debug_assert_eq!(system.validate(g, within), Ok(()));
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    #[test]
    fn perfect_matchings() {
        let prism = library::prism();
        let m = find_perfect_matching(&prism).unwrap();
        assert!(m.is_perfect_for(&prism));
        assert_eq!(m.len(), 3);
        assert!(Matching::new(&prism, library::prism_matching()).unwrap().is_perfect_for(&prism));
        assert!(find_perfect_matching(&library::path(5)).is_none());
        assert!(find_perfect_matching(&library::star(4)).is_none());
        let p4 = find_perfect_matching(&library::path(4)).unwrap();
        assert_eq!(p4.pairs(), vec![(0, 1), (2, 3)]);
        assert_eq!(p4.partner(2), Some(3));
    }

    #[test]
    fn matching_rejects_bad_pairs() {
        let g = library::path(4);
        assert!(Matching::new(&g, [(0, 2)]).is_err());
        assert!(Matching::new(&g, [(0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn connectivity_values() {
        assert_eq!(vertex_connectivity(&library::prism()), 3);
        assert_eq!(vertex_connectivity(&library::complete(4)), 3);
        assert_eq!(vertex_connectivity(&library::path(5)), 1);
        assert_eq!(vertex_connectivity(&library::cube()), 3);
        assert_eq!(vertex_connectivity(&library::petersen()), 3);
        assert_eq!(vertex_connectivity(&library::cycle(6)), 2);
        assert_eq!(vertex_connectivity(&Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()), 0);
        assert_eq!(vertex_connectivity(&library::complete(1)), 0);
        assert_eq!(vertex_connectivity(&library::complete_bipartite(3, 3)), 3);
    }

    #[test]
    fn k_connectivity() {
        let prism = library::prism();
        assert!(is_k_connected(&prism, 3));
        assert!(!is_k_connected(&prism, 4));
        let rest = prism.vertices().difference(set(&[2, 3]));
        assert!(is_k_connected_within(&prism, rest, 1));
        assert!(!is_k_connected_within(&prism, rest, 2));
        assert!(!is_k_connected(&library::path(5), 2));
        // K4 is 3-connected but not 4-connected (needs more than 4 vertices)
        assert!(is_k_connected(&library::complete(4), 3));
        assert!(!is_k_connected(&library::complete(4), 4));
    }

    #[test]
    fn min_degrees() {
        assert_eq!(min_degree(&library::prism()), 3);
        assert_eq!(min_degree(&library::star(4)), 1);
        assert_eq!(min_degree(&library::complete(4)), 3);
    }

    #[test]
    fn paths_in_a_path() {
        // prism minus paper vertices 3,4 is the path 1-2-5-6
        let prism = library::prism();
        let rest = prism.vertices().difference(set(&[2, 3]));
        let sys = disjoint_paths(&prism, rest, set(&[0]), set(&[5]), 1).unwrap();
        assert_eq!(sys.paths, vec![vec![0, 1, 4, 5]]);
    }

    #[test]
    fn paths_in_complete_and_cycle() {
        let k4 = library::complete(4);
        let sys = disjoint_paths(&k4, k4.vertices(), set(&[0, 1]), set(&[2, 3]), 2).unwrap();
        assert_eq!(sys.paths.len(), 2);
        assert!(sys.paths.iter().all(|p| p.len() == 2));
        sys.validate(&k4, k4.vertices()).unwrap();

        let c5 = library::cycle(5);
        let sys = disjoint_paths(&c5, c5.vertices(), set(&[0, 1]), set(&[2, 3]), 2).unwrap();
        sys.validate(&c5, c5.vertices()).unwrap();
        assert_eq!(sys.paths.len(), 2);
    }

    #[test]
    fn paths_report_insufficient_connectivity() {
        let star = library::star(5);
        let err = disjoint_paths(&star, star.vertices(), set(&[1, 2]), set(&[3, 4]), 2).unwrap_err();
        assert_eq!(err, ConnectivityError::InsufficientConnectivity { found: 1, needed: 2 });
        assert!(matches!(
            disjoint_paths(&star, star.vertices(), set(&[1]), set(&[1]), 1),
            Err(ConnectivityError::InvalidRequest(_))
        ));
    }

    #[test]
    fn matching_json_shape() {
        let m = Matching::new(&library::path(4), [(0, 1), (2, 3)]).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"matching":[[0,1],[2,3]]}"#);
    }
}
