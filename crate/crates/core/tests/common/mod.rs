#![allow(dead_code)]

use bipforest::generate::{random_dense_quadrangulation, random_quadrangulation, random_tree};
use bipforest::{generate_corpus, CorpusEntry, Family, GenOptions, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DESK_MAX_N: usize = 20;
pub const RANDOM_QUADS: usize = 500;
pub const CORPUS_SEED: u64 = 2024;

/// Every deterministic family member with at most `max_n` vertices, plus a
/// batch of seeded trees.
pub fn family_fixtures(max_n: usize) -> Vec<CorpusEntry> {
    let opts = GenOptions { seed: CORPUS_SEED, min_n: 1, max_n };
    let mut out = Vec::new();
    for family in Family::ALL {
        if family == Family::RandomQuadrangulations {
            continue;
        }
        let size = if family == Family::Trees { 60 } else { 40 };
        out.extend(generate_corpus(family, size, &opts).into_iter().filter(|e| e.n() <= max_n));
    }
    out
}

pub fn random_quads(count: usize, seed: u64, min_n: usize, max_n: usize) -> Vec<CorpusEntry> {
    generate_corpus(Family::RandomQuadrangulations, count, &GenOptions { seed, min_n, max_n })
}

/// The desk-scale corpus: all families up to 20 vertices and 500 random
/// quadrangulations.
pub fn desk_corpus() -> Vec<CorpusEntry> {
    let mut out = family_fixtures(DESK_MAX_N);
    out.extend(random_quads(RANDOM_QUADS, CORPUS_SEED, 8, DESK_MAX_N));
    out
}

/// A random bipartite planar graph: a random subgraph of a tree or a
/// quadrangulation, so planarity and bipartiteness are inherited.
pub fn random_bipartite_planar(seed: u64, max_n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n);
    let base = match (n, rng.gen_range(0..3)) {
        (0..=3, _) | (_, 0) => random_tree(n, &mut rng),
        (8.., 2) => random_dense_quadrangulation(n, &mut rng),
        _ => random_quadrangulation(n, &mut rng),
    };
    let keep = rng.gen_range(0.5..=1.0);
    let edges: Vec<_> = base.graph().edges().into_iter().filter(|_| rng.gen_bool(keep)).collect();
    Graph::new(base.n(), &edges).expect("subgraph of a valid graph")
}
