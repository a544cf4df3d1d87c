//! Simple undirected graphs on at most 64 vertices.
//!
//! Most queries come in two forms: a whole-graph form and a `_within`
//! form restricted to an induced vertex set. Induced subgraphs are never
//! re-indexed, so every certificate and transcript speaks in the original
//! vertex indices.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::set::{edge, Edge, EdgeSet, VertexSet, MAX_VERTICES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("graph must have between 1 and {MAX_VERTICES} vertices, got {0}")]
    VertexCount(usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    Duplicate(usize, usize),
    #[error("edge {0}-{1} references a vertex >= n = {2}")]
    OutOfRange(usize, usize, usize),
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCount { declared: usize, found: usize },
    #[error("{0} labels given for {1} vertices")]
    LabelCount(usize, usize),
    #[error("marked set must be nonempty")]
    EmptyMark,
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        let mut adj = vec![VertexSet::EMPTY; n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if adj[u].contains(v) {
                let (a, b) = edge(u, v);
                return Err(GraphError::Duplicate(a, b));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph { n, adj, labels: None })
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        Graph::from_edges(n, []).expect("vertex count in range")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount(labels.len(), self.n));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degree_within(&self, v: usize, within: VertexSet) -> usize {
        self.adj[v].intersection(within).len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of a vertex: its label if present, else its index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Resolves a label (or, failing that, a decimal index) to a vertex index.
    pub fn vertex_by_label(&self, name: &str) -> Option<usize> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Some(i);
            }
        }
        name.parse::<usize>().ok().filter(|&v| v < self.n)
    }

    /// Parses a vertex list such as `3,4`, `{1 2 5}` or `[0, 3]`, naming
    /// vertices as [`Graph::vertex_by_label`] does.
    pub fn parse_vertex_set(&self, text: &str) -> Result<VertexSet, GraphError> {
        let mut set = VertexSet::EMPTY;
        for token in text.split(|c: char| c == ',' || c.is_whitespace() || "{}[]".contains(c)) {
            if token.is_empty() {
                continue;
            }
            let v = self.vertex_by_label(token).ok_or_else(|| GraphError::UnknownVertex(token.to_string()))?;
            set.insert(v);
        }
        Ok(set)
    }

    pub fn format_set(&self, s: VertexSet) -> String {
        let names: Vec<_> = s.iter().map(|v| self.label(v)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> EdgeSet {
        self.edges_within(self.vertices())
    }

    /// Edges of the subgraph induced by `within`.
    pub fn edges_within(&self, within: VertexSet) -> EdgeSet {
        let mut out = EdgeSet::new();
        for u in within {
            for v in self.adj[u].intersection(within) {
                if u < v {
                    out.insert(u, v);
                }
            }
        }
        out
    }

    pub fn contains_edges(&self, edges: &EdgeSet) -> bool {
        edges.iter().all(|(u, v)| v < self.n && self.adjacent(u, v))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<_> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Same vertex indices, with the edges not in `keep` dropped.
    pub fn spanning_subgraph(&self, keep: &EdgeSet) -> Graph {
        let mut adj = vec![VertexSet::EMPTY; self.n];
        for (u, v) in keep.iter() {
            if self.adjacent(u, v) {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        Graph { n: self.n, adj, labels: self.labels.clone() }
    }

    /// Induced subgraph on `keep`, re-indexed `0..keep.len()` in increasing order.
    pub fn induced_reindexed(&self, keep: VertexSet) -> Graph {
        let order = keep.to_vec();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut adj = vec![VertexSet::EMPTY; order.len()];
        for (i, &v) in order.iter().enumerate() {
            for w in self.adj[v].intersection(keep) {
                adj[i].insert(pos[w]);
            }
        }
        let labels = self.labels.as_ref().map(|l| order.iter().map(|&v| l[v].clone()).collect());
        Graph { n: order.len(), adj, labels }
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let shift = self.n;
        let edges = self
            .edges()
            .iter()
            .chain(other.edges().iter().map(|(u, v)| (u + shift, v + shift)))
            .collect::<Vec<_>>();
        Graph::from_edges(self.n + other.n, edges)
    }

    /// Stable content hash over `n` and the sorted edge list (labels excluded).
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        for (u, v) in self.edges().iter() {
            h.update([u as u8, v as u8]);
        }
        hex::encode(h.finalize())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson {
            n: self.n,
            edges: self.edges().iter().map(|(u, v)| [u, v]).collect(),
            labels: self.labels.clone(),
        })
        .expect("graph serializes")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Graph, GraphError> {
        let raw: GraphJson = serde_json::from_value(v).map_err(|e| GraphError::Json(e.to_string()))?;
        let g = Graph::from_edges(raw.n, raw.edges.into_iter().map(|[u, v]| (u, v)))?;
        match raw.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }

    /// Edge-list text: `n m` header then one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges.iter() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Graph::from_json_value(v).map_err(serde::de::Error::custom)
    }
}

/// Parses either the edge-list text format or the JSON object format.
pub fn load_graph(source: &str) -> Result<Graph, GraphError> {
    if source.trim_start().starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(source).map_err(|e| GraphError::Json(e.to_string()))?;
        return Graph::from_json_value(v);
    }

    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Parse {
                line,
                message: format!("expected two integers, found {} fields", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| GraphError::Parse {
                line,
                message: format!("'{s}' is not a nonnegative integer"),
            })
        };
        let (a, b) = (parse(fields[0])?, parse(fields[1])?);
        let Some((n, _)) = header else {
            if a == 0 || a > MAX_VERTICES {
                return Err(GraphError::Parse {
                    line,
                    message: GraphError::VertexCount(a).to_string(),
                });
            }
            header = Some((a, b));
            continue;
        };
        let fail = |e: GraphError| GraphError::Parse { line, message: e.to_string() };
        if a == b {
            return Err(fail(GraphError::Loop(a)));
        }
        if a >= n || b >= n {
            return Err(fail(GraphError::OutOfRange(a, b, n)));
        }
        if !seen.insert(edge(a, b)) {
            let (u, v) = edge(a, b);
            return Err(fail(GraphError::Duplicate(u, v)));
        }
        edges.push((a, b));
    }
    let (n, m) = header.ok_or(GraphError::Parse { line: 0, message: "missing 'n m' header".into() })?;
    if edges.len() != m {
        return Err(GraphError::EdgeCount { declared: m, found: edges.len() });
    }
    Graph::from_edges(n, edges)
}

pub fn is_independent(g: &Graph, s: VertexSet) -> bool {
    s.iter().all(|v| g.neighbors(v).is_disjoint(s))
}

/// Vertices of `m \ d` that could join `d` without breaking independence.
pub fn addable_vertices(g: &Graph, m: VertexSet, d: VertexSet) -> VertexSet {
    m.difference(d).iter().filter(|&v| g.neighbors(v).is_disjoint(d)).collect()
}

/// True iff `d ⊆ m` is independent and no vertex of `m \ d` can be added.
pub fn is_maximal_independent_in(g: &Graph, m: VertexSet, d: VertexSet) -> bool {
    d.is_subset(m) && is_independent(g, d) && addable_vertices(g, m, d).is_empty()
}

/// All maximal independent subsets of the graph induced on `m`, sorted by mask.
///
/// Include/exclude branching over `m` in index order. An excluded vertex
/// must eventually gain a chosen neighbor; a branch is cut as soon as some
/// excluded vertex has no chosen neighbor and no undecided candidate left
/// that could become one.
pub fn maximal_independent_subsets(g: &Graph, m: VertexSet) -> Result<Vec<VertexSet>, GraphError> {
    if m.is_empty() {
        return Err(GraphError::EmptyMark);
    }
    let mut out = Vec::new();
    mis_branch(g, VertexSet::EMPTY, m, VertexSet::EMPTY, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn mis_branch(
    g: &Graph,
    chosen: VertexSet,
    candidates: VertexSet,
    excluded: VertexSet,
    out: &mut Vec<VertexSet>,
) {
    // every excluded vertex needs a chosen neighbor, now or later
    for x in excluded {
        let nx = g.neighbors(x);
        if nx.is_disjoint(chosen) && nx.is_disjoint(candidates) {
            return;
        }
    }
    let Some(v) = candidates.first() else {
        out.push(chosen);
        return;
    };
    let rest = candidates.without(v);
    let nv = g.neighbors(v);
    // include v: its neighbors leave the candidate pool and are dominated
    mis_branch(g, chosen.with(v), rest.difference(nv), excluded.difference(nv), out);
    // exclude v: only sensible if some neighbor can still be chosen
    if !nv.is_disjoint(rest) {
        mis_branch(g, chosen, rest, excluded.with(v), out);
    }
}

pub fn independence_number(g: &Graph) -> usize {
    independence_number_within(g, g.vertices())
}

/// Maximum independent set size of the subgraph induced by `within`.
pub fn independence_number_within(g: &Graph, within: VertexSet) -> usize {
    fn go(g: &Graph, cand: VertexSet) -> usize {
        let Some(v) = cand.first() else { return 0 };
        let rest = cand.without(v);
        let take = 1 + go(g, rest.difference(g.neighbors(v)));
        if g.neighbors(v).is_disjoint(rest) {
            // v isolated in the candidate graph: taking it is never worse
            return take;
        }
        take.max(go(g, rest))
    }
    go(g, within)
}

pub fn components(g: &Graph, within: VertexSet) -> Vec<VertexSet> {
    let mut out = Vec::new();
    let mut left = within;
    while let Some(start) = left.first() {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next.union(g.neighbors(v));
            }
            frontier = next.intersection(within).difference(comp);
            comp = comp.union(frontier);
        }
        left = left.difference(comp);
        out.push(comp);
    }
    out
}

pub fn is_connected_within(g: &Graph, within: VertexSet) -> bool {
    components(g, within).len() <= 1
}

/// Some cycle of the subgraph `(V(g), edges)`, as a vertex sequence without
/// the closing repeat, or `None` if `edges` is a forest.
pub fn find_cycle(g: &Graph, edges: &EdgeSet) -> Option<Vec<usize>> {
    let sub = g.spanning_subgraph(edges);
    let n = sub.n();
    let mut parent = vec![usize::MAX; n];
    let mut visited = VertexSet::EMPTY;
    for root in 0..n {
        if visited.contains(root) {
            continue;
        }
        // iterative DFS, smallest neighbor first
        let mut stack: Vec<(usize, VertexSet)> = vec![(root, sub.neighbors(root))];
        visited.insert(root);
        while let Some((v, pending)) = stack.last_mut() {
            let v = *v;
            let Some(w) = pending.first() else {
                stack.pop();
                continue;
            };
            pending.remove(w);
            if w == parent[v] {
                continue;
            }
            if visited.contains(w) {
                // back edge v-w closes a cycle along the tree path w .. v
                let mut cycle = vec![v];
                let mut cur = v;
                while cur != w {
                    cur = parent[cur];
                    cycle.push(cur);
                }
                cycle.reverse();
                return Some(cycle);
            }
            visited.insert(w);
            parent[w] = v;
            stack.push((w, sub.neighbors(w)));
        }
    }
    None
}
