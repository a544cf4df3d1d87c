//! Named builtin graphs, seeded random families and small exhaustive
//! enumerations (all graphs / all trees up to isomorphism).

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::set::Edge;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("unknown graph family '{0}'")]
    UnknownFamily(String),
    #[error("bad parameter in '{0}'")]
    BadParameter(String),
}

/// Triangular prism: triangles {0,1,2} and {3,4,5} joined by rungs
/// (0,3), (1,4), (2,5). Vertices carry the 1-based labels "1".."6".
pub fn prism() -> Graph {
    let edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)];
    Graph::from_edges(6, edges)
        .and_then(|g| g.with_labels((1..=6).map(|i| i.to_string()).collect()))
        .expect("prism is well formed")
}

/// The rung matching of [`prism`].
pub fn prism_matching() -> Vec<Edge> {
    vec![(0, 3), (1, 4), (2, 5)]
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path size in range")
}

/// Star on `n` vertices (K_{1,n-1}) with center 0.
pub fn star(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (0, i))).expect("star size in range")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle size in range")
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(n, edges).expect("complete graph size in range")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
    Graph::from_edges(a + b, edges).expect("bipartite size in range")
}

/// The 3-cube Q3 on bit-vectors 0..8.
pub fn cube() -> Graph {
    let edges = (0..8usize).flat_map(|u| (0..3).map(move |b| (u, u ^ 1 << b))).filter(|&(u, v)| u < v);
    Graph::from_edges(8, edges).expect("cube is well formed")
}

/// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i ~ i+5.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, edges).expect("petersen is well formed")
}

/// Resolves a builtin name such as `prism`, `path:5` or `bipartite:3,3`.
pub fn builtin(spec: &str) -> Result<Graph, SpecError> {
    let (family, arg) = match spec.split_once(':') {
        Some((f, a)) => (f, Some(a)),
        None => (spec, None),
    };
    let bad = || SpecError::BadParameter(spec.to_string());
    let num = |lo: usize, hi: usize| -> Result<usize, SpecError> {
        arg.and_then(|a| a.trim().parse::<usize>().ok()).filter(|n| (lo..=hi).contains(n)).ok_or_else(bad)
    };
    match family {
        "prism" if arg.is_none() => Ok(prism()),
        "cube" if arg.is_none() => Ok(cube()),
        "petersen" if arg.is_none() => Ok(petersen()),
        "path" => Ok(path(num(1, 64)?)),
        "star" => Ok(star(num(1, 64)?)),
        "cycle" => Ok(cycle(num(3, 64)?)),
        "complete" => Ok(complete(num(1, 64)?)),
        "empty" => Ok(Graph::empty(num(1, 64)?)),
        "bipartite" => {
            let (a, b) = arg.and_then(|a| a.split_once(',')).ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a + b == 0 || a + b > 64 {
                return Err(bad());
            }
            Ok(complete_bipartite(a, b))
        }
        _ => Err(SpecError::UnknownFamily(spec.to_string())),
    }
}

/// Erdős–Rényi G(n, p).
pub fn random_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("size in range")
}

/// Uniform labeled tree via a random Prüfer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    if n <= 2 {
        return path(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    Graph::from_edges(n, prufer_edges(n, &seq)).expect("prufer decoding yields a tree")
}

/// Random forest: a random tree with each edge kept with probability `keep`.
pub fn random_forest<R: Rng>(n: usize, keep: f64, rng: &mut R) -> Graph {
    let t = random_tree(n, rng);
    let mut edges: Vec<Edge> = t.edges().iter().filter(|_| rng.gen_bool(keep)).collect();
    edges.shuffle(rng);
    Graph::from_edges(n, edges).expect("subforest of a tree")
}

fn prufer_edges(n: usize, seq: &[usize]) -> Vec<Edge> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    for &s in seq {
        let leaf = *leaves.iter().next().expect("a leaf always exists");
        leaves.remove(&leaf);
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Upper-triangle adjacency code, bit index of pair (u,v) u<v in row-major order.
fn code_of(g: &Graph, perm: &[usize]) -> u64 {
    let n = g.n();
    let mut code = 0u64;
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.adjacent(perm[i], perm[j]) {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

/// Canonical code by brute force over all vertex permutations (n ≤ 8).
pub fn canonical_code(g: &Graph) -> u64 {
    assert!(g.n() <= 8, "brute-force canonical form is for tiny graphs");
    permutations(g.n()).iter().map(|p| code_of(g, p)).min().unwrap_or(0)
}

/// One representative of every isomorphism class of graphs on `n` vertices.
pub fn all_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!((1..=6).contains(&n), "exhaustive enumeration supports 1..=6 vertices");
    let pairs: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut classes: BTreeMap<u64, Graph> = BTreeMap::new();
    for mask in 0u64..1 << pairs.len() {
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        let g = Graph::from_edges(n, edges).expect("valid by construction");
        let canon = perms.iter().map(|p| code_of(&g, p)).min().unwrap_or(0);
        classes.entry(canon).or_insert(g);
    }
    classes.into_values().collect()
}

/// One representative of every unlabeled tree on `n` vertices.
pub fn all_trees(n: usize) -> Vec<Graph> {
    assert!((1..=10).contains(&n), "tree enumeration supports 1..=10 vertices");
    if n <= 2 {
        return vec![path(n)];
    }
    let mut classes: BTreeMap<String, Graph> = BTreeMap::new();
    let total = n.pow((n - 2) as u32);
    let mut seq = vec![0usize; n - 2];
    for mut idx in 0..total {
        for s in seq.iter_mut() {
            *s = idx % n;
            idx /= n;
        }
        let g = Graph::from_edges(n, prufer_edges(n, &seq)).expect("prufer decoding yields a tree");
        classes.entry(tree_canonical(&g)).or_insert(g);
    }
    classes.into_values().collect()
}

/// AHU encoding rooted at the center (bicentral trees take the smaller encoding).
pub fn tree_canonical(t: &Graph) -> String {
    fn encode(t: &Graph, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> =
            t.neighbors(v).iter().filter(|&w| w != parent).map(|w| encode(t, w, v)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    // peel leaves to find the center(s)
    let n = t.n();
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut alive = t.vertices();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while alive.len() > 2 {
        for &v in &layer {
            alive.remove(v);
        }
        let mut next = Vec::new();
        for &v in &layer {
            for w in t.neighbors(v).intersection(alive) {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|&c| encode(t, c, usize::MAX)).min().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::find_cycle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtins_pinned() {
        let p = prism();
        assert_eq!(p.edge_count(), 9);
        assert_eq!(p.degree_sequence(), vec![3; 6]);
        let q = cube();
        assert_eq!(q.edge_count(), 12);
        assert_eq!(q.degree_sequence(), vec![3; 8]);
        let pet = petersen();
        assert_eq!(pet.edge_count(), 15);
        assert_eq!(pet.degree_sequence(), vec![3; 10]);
        assert_eq!(complete_bipartite(3, 3).edge_count(), 9);
        assert_eq!(star(4).degree_sequence(), vec![3, 1, 1, 1]);
        assert_eq!(cycle(5).edge_count(), 5);
        assert_eq!(complete(4).edge_count(), 6);
    }

    #[test]
    fn builtin_specs() {
        assert_eq!(builtin("prism").unwrap(), prism());
        assert_eq!(builtin("path:5").unwrap().edge_count(), 4);
        assert_eq!(builtin("bipartite:3,3").unwrap().n(), 6);
        assert_eq!(builtin("star:4").unwrap(), star(4));
        assert!(matches!(builtin("moebius"), Err(SpecError::UnknownFamily(_))));
        assert!(matches!(builtin("path:0"), Err(SpecError::BadParameter(_))));
        assert!(matches!(builtin("cycle:2"), Err(SpecError::BadParameter(_))));
        assert!(matches!(builtin("complete:x"), Err(SpecError::BadParameter(_))));
    }

    #[test]
    fn class_counts_match_known_sequences() {
        // OEIS A000088 and A000055
        let graphs: Vec<usize> = (1..=5).map(|n| all_graphs_up_to_iso(n).len()).collect();
        assert_eq!(graphs, vec![1, 2, 4, 11, 34]);
        let trees: Vec<usize> = (1..=8).map(|n| all_trees(n).len()).collect();
        assert_eq!(trees, vec![1, 1, 1, 2, 3, 6, 11, 23]);
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..12 {
            let t = random_tree(n, &mut rng);
            assert_eq!(t.edge_count(), n - 1);
            assert!(find_cycle(&t, &t.edges()).is_none());
        }
        let f = random_forest(9, 0.6, &mut rng);
        assert!(find_cycle(&f, &f.edges()).is_none());
    }
}
