//! The exact routines against brute-force references.

mod oracle;

use oracle::*;
use slowcolor::connectivity::{find_perfect_matching, vertex_connectivity};
use slowcolor::forest::spanning_forest_13_exists;
use slowcolor::graph::maximal_independent_subsets;
use slowcolor::solver::{closed_form_path, closed_form_star};
use slowcolor::{library, solve, solve_additive, Graph, SolveOptions, VertexSet};

fn value(g: &Graph) -> u32 {
    solve(g, &SolveOptions::default()).unwrap().value
}

fn full(g: &Graph) -> u64 {
    g.vertices().bits()
}

#[test]
fn solver_matches_naive_search_on_every_labeled_graph_up_to_four_vertices() {
    let mut checked = 0;
    for n in 1..=4 {
        for g in all_labeled(n) {
            let expected = naive_value(&g, full(&g));
            assert_eq!(value(&g), expected, "{:?}", g.edges());
            assert_eq!(solve(&g, &SolveOptions::strict()).unwrap().value, expected);
            checked += 1;
        }
    }
    assert_eq!(checked, 1 + 2 + 8 + 64);
}

#[test]
fn solver_matches_naive_search_on_random_five_vertex_graphs() {
    let mut seed = 11;
    for i in 0..120 {
        let g = lcg_graph(5, [20, 40, 60, 80][i % 4], &mut seed);
        assert_eq!(value(&g), naive_value(&g, full(&g)), "{:?}", g.edges());
    }
}

#[test]
fn subgame_values_match_naive_search() {
    let mut seed = 5;
    let g = lcg_graph(6, 50, &mut seed);
    let mut solver = slowcolor::Solver::for_graph(&g, SolveOptions::default()).unwrap();
    for r in submasks(full(&g)).into_iter().filter(|&r| r.count_ones() <= 4) {
        assert_eq!(solver.value(VertexSet(r)).unwrap(), naive_value(&g, r), "R = {r:b}");
    }
}

#[test]
fn maximal_independent_subsets_match_subset_enumeration() {
    let mut seed = 3;
    for i in 0..60 {
        let n = 1 + i % 6;
        let g = lcg_graph(n, 45, &mut seed);
        for m in submasks(full(&g)).into_iter().filter(|&m| m != 0) {
            let mut got: Vec<u64> = maximal_independent_subsets(&g, VertexSet(m)).unwrap().iter().map(|s| s.bits()).collect();
            got.sort_unstable();
            assert_eq!(got, mis_brute(&g, m), "{:?} M = {m:b}", g.edges());
        }
    }
}

#[test]
fn connectivity_matches_cut_enumeration() {
    let mut seed = 17;
    for i in 0..300 {
        let n = 1 + i % 8;
        let g = lcg_graph(n, [30, 55, 75, 90][i % 4], &mut seed);
        assert_eq!(vertex_connectivity(&g), connectivity_brute(&g), "{:?}", g.edges());
    }
    for g in [library::prism(), library::cube(), library::complete(6), library::complete_bipartite(3, 4), library::cycle(7)] {
        assert_eq!(vertex_connectivity(&g), connectivity_brute(&g));
    }
}

#[test]
fn perfect_matchings_match_exhaustive_search() {
    let mut seed = 23;
    for i in 0..200 {
        let n = 1 + i % 8;
        let g = lcg_graph(n, 35, &mut seed);
        let found = find_perfect_matching(&g);
        assert_eq!(found.is_some(), has_perfect_matching_brute(&g, full(&g)), "{:?}", g.edges());
        if let Some(m) = found {
            assert!(m.is_perfect_for(&g));
            assert!(m.pairs().iter().all(|&(u, v)| g.adjacent(u, v)));
        }
    }
}

#[test]
fn forest_search_matches_edge_subset_enumeration() {
    let mut seed = 29;
    let mut found = [0usize; 2];
    for i in 0..150 {
        let n = 1 + i % 7;
        let g = lcg_graph(n, 40, &mut seed);
        for allow in [false, true] {
            let got = spanning_forest_13_exists(&g, allow).unwrap();
            assert_eq!(got.is_some(), forest_13_brute(&g, allow), "{:?} allow={allow}", g.edges());
            if let Some(cert) = got {
                cert.check(&g).unwrap();
                found[allow as usize] += 1;
            }
        }
    }
    assert!(found[0] > 0 && found[1] > found[0], "both outcomes exercised: {found:?}");
}

#[test]
fn additive_solver_matches_naive_search_on_unions() {
    let mut seed = 31;
    for i in 0..40 {
        let a = lcg_graph(1 + i % 3, 60, &mut seed);
        let b = lcg_graph(1 + (i / 3) % 3, 60, &mut seed);
        let g = a.disjoint_union(&b).unwrap();
        let expected = naive_value(&g, full(&g));
        assert_eq!(solve_additive(&g, &SolveOptions::default()).unwrap().value, expected);
        assert_eq!(expected, naive_value(&a, full(&a)) + naive_value(&b, full(&b)));
    }
}

#[test]
fn named_graphs_match_tabled_minimax() {
    for (g, expected) in [(library::prism(), 12), (library::complete(4), 10), (library::cycle(5), 9), (library::cube(), 13)] {
        let reference = memo_value(&g, full(&g), &mut Default::default());
        assert_eq!(reference, expected);
        assert_eq!(value(&g), reference);
    }
}

#[test]
fn path_values() {
    // ⌊3n/2⌋ for paths
    for n in 1..=8 {
        assert_eq!(value(&library::path(n)), (3 * n / 2) as u32, "P{n}");
        assert_eq!(closed_form_path(n), (3 * n / 2) as u32);
    }
}

#[test]
fn star_values_against_naive_search() {
    // naive search is affordable up to K1,4; the solver and the closed form
    // take over above that, and are compared with each other
    for n in 2..=5 {
        let g = library::star(n);
        assert_eq!(value(&g), naive_value(&g, full(&g)), "star {n}");
        assert_eq!(closed_form_star(n), value(&g));
    }
    for n in 6..=9 {
        assert_eq!(closed_form_star(n), value(&library::star(n)), "star {n}");
    }
}

#[test]
fn tree_values_lie_between_star_and_path() {
    for n in 2..=8 {
        for t in library::all_trees(n) {
            let v = value(&t);
            assert!(closed_form_star(n) <= v && v <= (3 * n / 2) as u32, "n = {n}: {v}");
        }
    }
}
