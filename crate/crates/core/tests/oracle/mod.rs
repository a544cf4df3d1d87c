//! Brute-force reference implementations. Nothing here calls into the
//! solver, matching, flow or forest code it is compared against; only
//! the plain `Graph` adjacency queries are shared.

#![allow(dead_code)]

use slowcolor::Graph;

pub fn members(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&v| mask >> v & 1 == 1)
}

/// Every submask of `mask`, including 0 and `mask` itself.
pub fn submasks(mask: u64) -> Vec<u64> {
    let mut out = vec![0];
    let mut s = mask;
    while s != 0 {
        out.push(s);
        s = (s - 1) & mask;
    }
    out
}

pub fn independent(g: &Graph, s: u64) -> bool {
    members(s).all(|u| members(s).all(|v| u == v || !g.adjacent(u, v)))
}

/// Maximal independent subsets of `m` in G[m], by checking every subset.
pub fn mis_brute(g: &Graph, m: u64) -> Vec<u64> {
    let mut out: Vec<u64> = submasks(m)
        .into_iter()
        .filter(|&d| independent(g, d))
        .filter(|&d| members(m & !d).all(|v| members(d).any(|u| g.adjacent(u, v))))
        .collect();
    out.sort_unstable();
    out
}

/// Game value by plain minimax over every mark and reply, no memo, no pruning.
pub fn naive_value(g: &Graph, remaining: u64) -> u32 {
    if remaining == 0 {
        return 0;
    }
    submasks(remaining)
        .into_iter()
        .filter(|&m| m != 0)
        .map(|m| {
            mis_brute(g, m)
                .into_iter()
                .map(|d| m.count_ones() + naive_value(g, remaining & !d))
                .min()
                .expect("a nonempty mark has a maximal independent subset")
        })
        .max()
        .expect("nonempty remaining set")
}

/// The same minimax with a plain table keyed by remaining set; still no
/// pruning and no component splitting.
pub fn memo_value(g: &Graph, remaining: u64, table: &mut std::collections::HashMap<u64, u32>) -> u32 {
    if remaining == 0 {
        return 0;
    }
    if let Some(&v) = table.get(&remaining) {
        return v;
    }
    let mut best = 0;
    for m in submasks(remaining).into_iter().filter(|&m| m != 0) {
        let worst = mis_brute(g, m)
            .into_iter()
            .map(|d| m.count_ones() + memo_value(g, remaining & !d, table))
            .min()
            .expect("a nonempty mark has a maximal independent subset");
        best = best.max(worst);
    }
    table.insert(remaining, best);
    best
}

pub fn connected(g: &Graph, within: u64) -> bool {
    let Some(start) = members(within).next() else { return true };
    let mut seen = 1u64 << start;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for v in members(within) {
            if seen >> v & 1 == 0 && g.adjacent(u, v) {
                seen |= 1 << v;
                stack.push(v);
            }
        }
    }
    seen == within
}

/// κ by trying every vertex cut, smallest first; complete graphs give n - 1.
pub fn connectivity_brute(g: &Graph) -> usize {
    let n = g.n();
    if n <= 1 {
        return 0;
    }
    let all = (1u64 << n) - 1;
    let mut best = n - 1;
    for cut in submasks(all) {
        let rest = all & !cut;
        if rest.count_ones() >= 2 && !connected(g, rest) {
            best = best.min(cut.count_ones() as usize);
        }
    }
    best
}

pub fn has_perfect_matching_brute(g: &Graph, left: u64) -> bool {
    let Some(u) = members(left).next() else { return true };
    members(left & !(1 << u)).any(|v| g.adjacent(u, v) && has_perfect_matching_brute(g, left & !(1 << u) & !(1 << v)))
}

fn acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for &(u, v) in edges {
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// A {1,3} spanning forest (or, for odd n with the exception allowed, one
/// vertex of degree 0 or 6 and the rest 1 or 3), by trying every edge subset.
pub fn forest_13_brute(g: &Graph, allow_odd_exception: bool) -> bool {
    let n = g.n();
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| g.adjacent(u, v)).collect();
    assert!(edges.len() <= 20, "brute force over 2^|E| subsets");
    (0u64..1 << edges.len()).any(|pick| {
        let chosen: Vec<(usize, usize)> = members(pick).map(|i| edges[i]).collect();
        let mut deg = vec![0usize; n];
        for &(u, v) in &chosen {
            deg[u] += 1;
            deg[v] += 1;
        }
        let odd_ones = deg.iter().filter(|&&d| d != 1 && d != 3).collect::<Vec<_>>();
        let degrees_ok = match odd_ones.as_slice() {
            [] => true,
            [d] => allow_odd_exception && n % 2 == 1 && (**d == 0 || **d == 6),
            _ => false,
        };
        degrees_ok && acyclic(n, &chosen)
    })
}

/// Random labeled graph from a seed, without the library generators.
pub fn lcg_graph(n: usize, p_percent: u64, seed: &mut u64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            if (*seed >> 33) % 100 < p_percent {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid edges")
}

/// Every labeled graph on `n` vertices.
pub fn all_labeled(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|pick| Graph::from_edges(n, members(pick).map(|i| pairs[i])).expect("valid edges"))
        .collect()
}
