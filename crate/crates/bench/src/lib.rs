//! Shared inputs for the benchmarks.

use bipforest::{generate_corpus, Family, GenOptions, PlaneGraph};

/// Seeded random quadrangulations with exactly `n` vertices.
pub fn quadrangulations(n: usize, count: usize, seed: u64) -> Vec<PlaneGraph> {
    let opts = GenOptions { seed, min_n: n, max_n: n };
    generate_corpus(Family::RandomQuadrangulations, count, &opts)
        .into_iter()
        .filter_map(|e| e.plane)
        .collect()
}

/// graph6 lines for a mixed batch of quadrangulations.
pub fn graph6_batch(count: usize) -> Vec<u8> {
    let mut out = Vec::new();
    for pg in quadrangulations(40, count, 1) {
        out.extend(bipforest::emit_graph6(pg.graph()));
        out.push(b'\n');
    }
    out
}
