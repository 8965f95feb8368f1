//! Embedded bipartite plane graph families and seeded random
//! quadrangulations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::PlaneGraph;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    EvenCycles,
    Grids,
    Prisms,
    CubeFamily,
    DoubleCubeMatching,
    RandomQuadrangulations,
    Trees,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::EvenCycles,
        Family::Grids,
        Family::Prisms,
        Family::CubeFamily,
        Family::DoubleCubeMatching,
        Family::RandomQuadrangulations,
        Family::Trees,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::EvenCycles => "even_cycles",
            Family::Grids => "grids",
            Family::Prisms => "prisms",
            Family::CubeFamily => "cube_family",
            Family::DoubleCubeMatching => "double_cube_matching",
            Family::RandomQuadrangulations => "random_quadrangulations",
            Family::Trees => "trees",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        let s = s.replace('-', "_");
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    File,
    Generator,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub source: Source,
    pub graph: Graph,
    pub plane: Option<PlaneGraph>,
    /// Only generator output and planar-code input carry an embedding we trust.
    pub attested_planar: bool,
}

impl CorpusEntry {
    pub fn generated(id: String, pg: PlaneGraph) -> CorpusEntry {
        CorpusEntry {
            id,
            source: Source::Generator,
            graph: pg.graph().clone(),
            plane: Some(pg),
            attested_planar: true,
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

/// Sizes and seed for the parameterized families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenOptions {
    pub seed: u64,
    pub min_n: usize,
    pub max_n: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            seed: 0,
            min_n: 8,
            max_n: 20,
        }
    }
}

/// `size` members of a family, smallest first. Random families draw their
/// vertex counts from `[min_n, max_n]`, one independent stream per member.
pub fn generate_corpus(family: Family, size: usize, opts: &GenOptions) -> Vec<CorpusEntry> {
    let mut out = Vec::with_capacity(size);
    match family {
        Family::EvenCycles => {
            for k in 2..size + 2 {
                out.push(CorpusEntry::generated(format!("cycle-{}", 2 * k), cycle(2 * k)));
            }
        }
        Family::Grids => {
            for (a, b) in grid_shapes().take(size) {
                out.push(CorpusEntry::generated(format!("grid-{a}x{b}"), grid(a, b)));
            }
        }
        Family::Prisms => {
            for k in 2..size + 2 {
                out.push(CorpusEntry::generated(format!("prism-{}", 2 * k), prism(2 * k)));
            }
        }
        Family::CubeFamily => {
            for k in 2..size + 2 {
                out.push(CorpusEntry::generated(format!("stacked-cube-{k}"), stacked_squares(k)));
            }
        }
        Family::DoubleCubeMatching => {
            for j in 2..size + 2 {
                out.push(CorpusEntry::generated(format!("cube-chain-{j}"), stacked_squares(2 * j)));
            }
        }
        Family::RandomQuadrangulations => {
            for i in 0..size {
                let mut rng = member_rng(opts.seed, i);
                let n = rng.gen_range(opts.min_n.max(4)..=opts.max_n.max(4));
                // Alternate between sparse and dense growth.
                let pg = if i % 2 == 0 {
                    random_quadrangulation(n, &mut rng)
                } else {
                    random_dense_quadrangulation(n, &mut rng)
                };
                out.push(CorpusEntry::generated(format!("quad-s{}-{i}-n{}", opts.seed, pg.n()), pg));
            }
        }
        Family::Trees => {
            for i in 0..size {
                let mut rng = member_rng(opts.seed, i);
                let n = rng.gen_range(opts.min_n.max(1)..=opts.max_n.max(1));
                out.push(CorpusEntry::generated(format!("tree-s{}-{i}-n{n}", opts.seed), random_tree(n, &mut rng)));
            }
        }
    }
    out
}

fn member_rng(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i as u64)
}

fn grid_shapes() -> impl Iterator<Item = (usize, usize)> {
    (2usize..).flat_map(|b| (2..=b).map(move |a| (a, b)))
}

fn build(rot: Vec<Vec<Vertex>>) -> PlaneGraph {
    PlaneGraph::from_rotation(rot).expect("generator produces a valid embedding")
}

pub fn cycle(n: usize) -> PlaneGraph {
    build((0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect())
}

/// `a x b` grid drawn in the plane, rows top to bottom.
pub fn grid(a: usize, b: usize) -> PlaneGraph {
    let id = |i: usize, j: usize| i * b + j;
    let mut rot = vec![Vec::new(); a * b];
    for i in 0..a {
        for j in 0..b {
            // Counterclockwise: east, north, west, south.
            let r = &mut rot[id(i, j)];
            if j + 1 < b {
                r.push(id(i, j + 1));
            }
            if i > 0 {
                r.push(id(i - 1, j));
            }
            if j > 0 {
                r.push(id(i, j - 1));
            }
            if i + 1 < a {
                r.push(id(i + 1, j));
            }
        }
    }
    build(rot)
}

/// `C_k x K_2` with the two cycles drawn concentrically.
pub fn prism(k: usize) -> PlaneGraph {
    concentric(k, 2)
}

/// `C_4 x P_k`: `k` nested squares joined by spokes. Two layers give the cube.
pub fn stacked_squares(k: usize) -> PlaneGraph {
    concentric(4, k)
}

pub fn cube() -> PlaneGraph {
    stacked_squares(2)
}

fn concentric(k: usize, layers: usize) -> PlaneGraph {
    let id = |l: usize, i: usize| l * k + i;
    let mut rot = vec![Vec::new(); k * layers];
    for l in 0..layers {
        for i in 0..k {
            let r = &mut rot[id(l, i)];
            if l > 0 {
                r.push(id(l - 1, i));
            }
            r.push(id(l, (i + 1) % k));
            if l + 1 < layers {
                r.push(id(l + 1, i));
            }
            r.push(id(l, (i + k - 1) % k));
        }
    }
    build(rot)
}

/// Uniform labeled tree on `n` vertices from a random Pruefer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> PlaneGraph {
    if n <= 2 {
        let rot = match n {
            0 => vec![],
            1 => vec![vec![]],
            _ => vec![vec![1], vec![0]],
        };
        return build(rot);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut rot = vec![Vec::new(); n];
    for &s in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        rot[leaf].push(s);
        rot[s].push(leaf);
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    rot[rest[0]].push(rest[1]);
    rot[rest[1]].push(rest[0]);
    build(rot)
}

/// Grows a quadrangulation with exactly `max(n, 4)` vertices. Each step
/// picks a random face `a b c d` and either adds a vertex joined to two
/// opposite corners, or nests a new square inside the face joined corner to
/// corner. Both keep the graph simple, bipartite and quadrangulated, with
/// minimum degree at least 2.
pub fn random_quadrangulation<R: Rng>(n: usize, rng: &mut R) -> PlaneGraph {
    let start = (0..4).map(|i| vec![(i + 3) % 4, (i + 1) % 4]).collect();
    grow_quadrangulation(start, n, 0.2, rng)
}

/// Like [`random_quadrangulation`] but starts from the cube and mostly nests
/// squares, so 2-vertices are rare and high degrees are common.
pub fn random_dense_quadrangulation<R: Rng>(n: usize, rng: &mut R) -> PlaneGraph {
    grow_quadrangulation(cube().rotations().to_vec(), n, 0.85, rng)
}

fn grow_quadrangulation<R: Rng>(mut rot: Vec<Vec<Vertex>>, n: usize, p_nest: f64, rng: &mut R) -> PlaneGraph {
    while rot.len() < n {
        let faces = PlaneGraph::from_rotation(rot.clone())
            .expect("valid during growth")
            .trace_faces();
        let face = faces.choose(rng).expect("faces exist").vertices();
        let s = rng.gen_range(0..4);
        let [a, b, c, d] = [face[s], face[(s + 1) % 4], face[(s + 2) % 4], face[(s + 3) % 4]];
        let room = n - rot.len();
        if room >= 4 && rng.gen_bool(p_nest) {
            let base = rot.len();
            let [w, x, y, z] = [base, base + 1, base + 2, base + 3];
            insert_after(&mut rot[a], d, w);
            insert_after(&mut rot[b], a, x);
            insert_after(&mut rot[c], b, y);
            insert_after(&mut rot[d], c, z);
            rot.extend([vec![a, z, x], vec![b, w, y], vec![c, x, z], vec![d, y, w]]);
        } else {
            let x = rot.len();
            insert_after(&mut rot[a], d, x);
            insert_after(&mut rot[c], b, x);
            rot.push(vec![a, c]);
        }
    }
    build(rot)
}

fn insert_after(r: &mut Vec<Vertex>, anchor: Vertex, x: Vertex) {
    let i = r.iter().position(|&y| y == anchor).expect("anchor in rotation");
    r.insert(i + 1, x);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_embedded_and_bipartite() {
        let opts = GenOptions::default();
        for fam in Family::ALL {
            for e in generate_corpus(fam, 6, &opts) {
                assert!(e.graph.is_bipartite(), "{}", e.id);
                assert!(e.attested_planar);
                assert!(e.plane.is_some());
            }
        }
    }

    #[test]
    fn named_members() {
        assert_eq!(cube().n(), 8);
        assert!(cube().is_quadrangulation());
        assert_eq!(cube().face_count(), 6);
        let g = grid(3, 3);
        assert_eq!((g.n(), g.graph().edge_count()), (9, 12));
        let dc = &generate_corpus(Family::DoubleCubeMatching, 1, &GenOptions::default())[0];
        assert_eq!(dc.n(), 16);
        assert!(dc.plane.as_ref().unwrap().is_quadrangulation());
        assert_eq!(generate_corpus(Family::CubeFamily, 1, &GenOptions::default())[0].n(), 8);
        assert!(prism(6).is_quadrangulation() == false);
    }

    #[test]
    fn random_quadrangulations_are_quadrangulations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [4, 5, 9, 17, 40] {
            let pg = random_quadrangulation(n, &mut rng);
            assert!(pg.n() >= n && pg.n() <= n + 3);
            assert!(pg.is_quadrangulation());
            assert!(pg.graph().min_degree() >= 2);
            assert!(pg.graph().is_bipartite());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let opts = GenOptions { seed: 3, min_n: 10, max_n: 30 };
        let a = generate_corpus(Family::RandomQuadrangulations, 5, &opts);
        let b = generate_corpus(Family::RandomQuadrangulations, 5, &opts);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.plane.as_ref().unwrap().rotations(), y.plane.as_ref().unwrap().rotations());
        }
    }

    #[test]
    fn trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..15 {
            let t = random_tree(n, &mut rng);
            assert_eq!(t.graph().edge_count(), n - 1);
            assert!(t.graph().is_connected());
        }
    }
}
