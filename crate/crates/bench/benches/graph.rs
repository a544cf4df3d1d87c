use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slowcolor::connectivity::{disjoint_paths, find_perfect_matching, vertex_connectivity};
use slowcolor::forest::{beta_context, build_forest_traced, spanning_forest_13_exists};
use slowcolor::graph::{independence_number, maximal_independent_subsets};
use slowcolor::{library, Instance, VertexSet};

fn independent_sets(c: &mut Criterion) {
    let cube = library::cube();
    let petersen = library::petersen();
    c.bench_function("mis/cube-all", |b| b.iter(|| maximal_independent_subsets(black_box(&cube), cube.vertices()).unwrap().len()));
    c.bench_function("mis/petersen-all", |b| {
        b.iter(|| maximal_independent_subsets(black_box(&petersen), petersen.vertices()).unwrap().len())
    });
    c.bench_function("alpha/petersen", |b| b.iter(|| independence_number(black_box(&petersen))));
}

fn connectivity(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let dense = library::random_gnp(24, 0.5, &mut rng);
    let petersen = library::petersen();
    let k8 = library::complete(8);
    c.bench_function("kappa/petersen", |b| b.iter(|| vertex_connectivity(black_box(&petersen))));
    c.bench_function("kappa/K8", |b| b.iter(|| vertex_connectivity(black_box(&k8))));
    c.bench_function("kappa/gnp-24", |b| b.iter(|| vertex_connectivity(black_box(&dense))));
    c.bench_function("matching/gnp-24", |b| b.iter(|| find_perfect_matching(black_box(&dense)).is_some()));
    let a: VertexSet = [0usize, 1, 2].into_iter().collect();
    let z: VertexSet = [7usize, 8, 9].into_iter().collect();
    c.bench_function("menger/petersen-3", |b| {
        b.iter(|| disjoint_paths(black_box(&petersen), petersen.vertices(), a, z, 3).unwrap())
    });
}

fn forests(c: &mut Criterion) {
    let inst = Instance::builtin("prism").unwrap();
    let matching = inst.perfect_matching().unwrap();
    let d: VertexSet = [2usize, 3].into_iter().collect();
    let ctx = beta_context(&inst.graph, &matching, d).unwrap();
    let paths = disjoint_paths(&ctx.graph, ctx.alive, VertexSet::singleton(0), VertexSet::singleton(5), 1).unwrap();
    c.bench_function("forest/prism-pipeline", |b| b.iter(|| build_forest_traced(black_box(&ctx), &paths).unwrap()));
    let trees = library::all_trees(10);
    c.bench_function("forest/search-trees-10", |b| {
        b.iter(|| trees.iter().filter(|t| spanning_forest_13_exists(t, true).unwrap().is_some()).count())
    });
}

criterion_group!(benches, independent_sets, connectivity, forests);
criterion_main!(benches);
