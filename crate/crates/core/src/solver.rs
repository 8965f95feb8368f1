//! Exact maximum induced forest: branch and bound over the complementary
//! feedback vertex set, plus an exhaustive oracle for small graphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::inequality::bound;

/// Largest graph the bitmask solver accepts.
pub const MAX_VERTICES: usize = 128;
/// Largest graph the exhaustive oracle accepts.
pub const BRUTEFORCE_MAX: usize = 20;
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("search exceeded the node budget of {0}")]
    BudgetExceeded(u64),
    #[error("graph has {n} vertices, limit is {max}")]
    TooLarge { n: usize, max: usize },
    #[error("vertex {v} has degree {degree}; a forced vertex needs degree at most 3")]
    ForcedDegree { v: Vertex, degree: usize },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(Vertex),
    #[error("forced vertices already contain a cycle")]
    Infeasible,
}

/// A vertex set inducing a forest, with the bound it is measured against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestCertificate {
    pub vertices: VertexSet,
    pub size: usize,
    pub bound_target: usize,
}

impl ForestCertificate {
    pub fn new(g: &Graph, vertices: VertexSet) -> ForestCertificate {
        ForestCertificate {
            size: vertices.len(),
            bound_target: target_for(g.n()),
            vertices,
        }
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        self.size == self.vertices.len()
            && self.vertices.iter().all(|v| v < g.n())
            && g.induces_forest(&self.vertices)
    }
}

/// The bound for `n` vertices, or zero for the empty graph.
pub fn target_for(n: usize) -> usize {
    bound(n).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub a: usize,
    pub target: usize,
    pub ok: bool,
    /// False when the input is not bipartite, so the bound is not claimed.
    pub in_hypothesis: bool,
    pub certificate: ForestCertificate,
}

/// Branch-and-bound settings.
#[derive(Debug, Clone, Copy)]
pub struct Solver {
    pub budget: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            budget: DEFAULT_BUDGET,
        }
    }
}

pub fn a_exact(g: &Graph) -> Result<ForestCertificate, SolverError> {
    Solver::default().solve(g)
}

pub fn a_with_forced_vertex(g: &Graph, v: Vertex) -> Result<ForestCertificate, SolverError> {
    Solver::default().solve_forced(g, v)
}

pub fn bound_holds(g: &Graph) -> Result<BoundReport, SolverError> {
    Solver::default().bound_holds(g)
}

impl Solver {
    pub fn with_budget(budget: u64) -> Self {
        Solver { budget }
    }

    /// Maximum induced forest; ties go to the lexicographically least set.
    pub fn solve(&self, g: &Graph) -> Result<ForestCertificate, SolverError> {
        self.solve_constrained(g, &VertexSet::new(), &VertexSet::new())
    }

    /// Some maximum induced forest, without the canonical tie-break.
    pub fn solve_any(&self, g: &Graph) -> Result<ForestCertificate, SolverError> {
        let n = g.n();
        if n > MAX_VERTICES {
            return Err(SolverError::TooLarge { n, max: MAX_VERTICES });
        }
        let mut search = Search::new(g, self.budget);
        let (_, witness) = search.best(0, 0, None)?.expect("the empty set is a forest");
        Ok(ForestCertificate::new(g, (0..n).filter(|&v| witness >> v & 1 == 1).collect()))
    }

    /// Maximum forest containing `v`, for `deg(v) <= 3`.
    pub fn solve_forced(&self, g: &Graph, v: Vertex) -> Result<ForestCertificate, SolverError> {
        if v >= g.n() {
            return Err(SolverError::VertexOutOfRange(v));
        }
        if g.degree(v) > 3 {
            return Err(SolverError::ForcedDegree {
                v,
                degree: g.degree(v),
            });
        }
        self.solve_constrained(g, &std::iter::once(v).collect(), &VertexSet::new())
    }

    /// Maximum forest containing `must` and avoiding `avoid`.
    pub fn solve_constrained(
        &self,
        g: &Graph,
        must: &VertexSet,
        avoid: &VertexSet,
    ) -> Result<ForestCertificate, SolverError> {
        let n = g.n();
        if n > MAX_VERTICES {
            return Err(SolverError::TooLarge { n, max: MAX_VERTICES });
        }
        if let Some(v) = must.iter().chain(avoid.iter()).find(|&v| v >= n) {
            return Err(SolverError::VertexOutOfRange(v));
        }
        let mut search = Search::new(g, self.budget);
        let fin0 = to_mask(must);
        let fout0 = to_mask(avoid) & !fin0;
        if !search.acyclic(fin0) {
            return Err(SolverError::Infeasible);
        }
        let (opt, mut witness) = search
            .best(fin0, fout0, None)?
            .expect("forced set is acyclic, so some forest exists");
        // Fix vertices greedily in id order, re-solving only when the current
        // witness disagrees with the wanted choice.
        let (mut fin, mut fout) = (fin0, fout0);
        for v in 0..n {
            let bit = 1u128 << v;
            if (fin | fout) & bit != 0 {
                continue;
            }
            if witness & bit != 0 {
                fin |= bit;
                continue;
            }
            if search.acyclic(fin | bit) {
                if let Some((_, w)) = search.best(fin | bit, fout, Some(opt))? {
                    witness = w;
                    fin |= bit;
                    continue;
                }
            }
            fout |= bit;
        }
        debug_assert_eq!(fin, witness);
        Ok(ForestCertificate::new(g, from_mask(witness)))
    }

    pub fn bound_holds(&self, g: &Graph) -> Result<BoundReport, SolverError> {
        let cert = self.solve(g)?;
        let target = target_for(g.n());
        Ok(BoundReport {
            n: g.n(),
            a: cert.size,
            target,
            ok: cert.size >= target,
            in_hypothesis: g.is_bipartite(),
            certificate: cert,
        })
    }
}

/// Exhaustive search over every vertex subset. Same tie-break as the solver.
pub fn a_bruteforce(g: &Graph) -> Result<ForestCertificate, SolverError> {
    let n = g.n();
    if n > BRUTEFORCE_MAX {
        return Err(SolverError::TooLarge {
            n,
            max: BRUTEFORCE_MAX,
        });
    }
    let edges = g.edges();
    let mut best: Option<(u32, u32)> = None;
    let mut parent = vec![0usize; n];
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones();
        if let Some((bs, bm)) = best {
            if size < bs {
                continue;
            }
            // Equal size: keep the set owning the lowest differing vertex.
            if size == bs && bm & (bm ^ mask) & (bm ^ mask).wrapping_neg() != 0 {
                continue;
            }
        }
        if subset_is_forest(&edges, mask, &mut parent) {
            best = Some((size, mask));
        }
    }
    let (_, mask) = best.unwrap_or((0, 0));
    let verts = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    Ok(ForestCertificate::new(g, verts))
}

fn subset_is_forest(edges: &[(Vertex, Vertex)], mask: u32, parent: &mut [usize]) -> bool {
    for (i, p) in parent.iter_mut().enumerate() {
        *p = i;
    }
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, v) in edges {
        if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
            let (a, b) = (find(parent, u), find(parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
    }
    true
}

fn to_mask(s: &VertexSet) -> u128 {
    s.iter().fold(0, |m, v| m | 1u128 << v)
}

fn from_mask(mut m: u128) -> VertexSet {
    let mut s = VertexSet::new();
    while m != 0 {
        s.insert(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    s
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

struct Search {
    nb: Vec<u128>,
    all: u128,
    nodes: u64,
    budget: u64,
}

struct Incumbent {
    size: u32,
    mask: Option<u128>,
    stop_at: Option<u32>,
}

impl Search {
    fn new(g: &Graph, budget: u64) -> Search {
        let nb = (0..g.n()).map(|v| to_mask(g.neighbors(v))).collect();
        let all = if g.n() == 128 { u128::MAX } else { (1u128 << g.n()) - 1 };
        Search {
            nb,
            all,
            nodes: 0,
            budget,
        }
    }

    fn component(&self, start: usize, within: u128) -> u128 {
        let mut comp = 1u128 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.nb[v];
            }
            next &= within & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    fn acyclic(&self, s: u128) -> bool {
        let mut rest = s;
        while rest != 0 {
            let comp = self.component(rest.trailing_zeros() as usize, s);
            let e: u32 = bits(comp).map(|v| (self.nb[v] & comp).count_ones()).sum::<u32>() / 2;
            if e + 1 != comp.count_ones() {
                return false;
            }
            rest &= !comp;
        }
        true
    }

    /// Best forest extending `fin` and avoiding `fout`. With `target`, stops
    /// at the first forest of that size and returns `None` if none exists.
    fn best(
        &mut self,
        fin: u128,
        fout: u128,
        target: Option<usize>,
    ) -> Result<Option<(usize, u128)>, SolverError> {
        let mut inc = Incumbent {
            size: 0,
            mask: None,
            stop_at: target.map(|t| t as u32),
        };
        if let Some(t) = target {
            // Only strictly larger than t-1 counts.
            inc.size = (t as u32).saturating_sub(1);
            if t == 0 {
                return Ok(Some((0, fin)));
            }
        }
        self.node(fin, fout, &mut inc)?;
        // Leaves only replace a strictly smaller incumbent, so an empty
        // optimum (no vertices at all) is never recorded.
        if target.is_none() && inc.mask.is_none() && fin == 0 {
            inc.mask = Some(0);
        }
        Ok(inc.mask.map(|m| (m.count_ones() as usize, m)))
    }

    fn node(&mut self, mut fin: u128, mut fout: u128, inc: &mut Incumbent) -> Result<(), SolverError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolverError::BudgetExceeded(self.budget));
        }
        let core = loop {
            let und = self.all & !fin & !fout;
            let mut changed = false;
            // An undecided vertex seeing one forest tree twice must go.
            let mut labels = [u8::MAX; 128];
            let mut rest = fin;
            let mut label = 0u8;
            while rest != 0 {
                let comp = self.component(rest.trailing_zeros() as usize, fin);
                for v in bits(comp) {
                    labels[v] = label;
                }
                label = label.wrapping_add(1);
                rest &= !comp;
            }
            for u in bits(und) {
                let mut seen = 0u128;
                for w in bits(self.nb[u] & fin) {
                    let l = labels[w] as u32;
                    if seen >> l & 1 == 1 {
                        fout |= 1u128 << u;
                        changed = true;
                        break;
                    }
                    seen |= 1u128 << l;
                }
            }
            // Vertices outside the 2-core of the alive graph lie on no cycle.
            let alive = self.all & !fout;
            let core = self.two_core(alive);
            let free = alive & !core & !fin;
            if free != 0 {
                fin |= free;
                changed = true;
            }
            if !changed {
                break core;
            }
        };
        let und = self.all & !fin & !fout;
        let cap = fin.count_ones() + und.count_ones();
        if cap <= inc.size {
            return Ok(());
        }
        if und == 0 {
            inc.size = fin.count_ones();
            inc.mask = Some(fin);
            return Ok(());
        }
        if cap - self.fvs_lower_bound(core, und) <= inc.size {
            return Ok(());
        }
        let v = bits(und)
            .max_by_key(|&v| ((self.nb[v] & core).count_ones(), std::cmp::Reverse(v)))
            .expect("undecided vertex");
        let bit = 1u128 << v;
        self.node(fin | bit, fout, inc)?;
        if inc.stop_at.is_some_and(|t| inc.size >= t) {
            return Ok(());
        }
        self.node(fin, fout | bit, inc)
    }

    fn two_core(&self, alive: u128) -> u128 {
        let mut core = alive;
        loop {
            let peel: u128 = bits(core)
                .filter(|&v| (self.nb[v] & core).count_ones() <= 1)
                .fold(0, |m, v| m | 1u128 << v);
            if peel == 0 {
                return core;
            }
            core &= !peel;
        }
    }

    /// Deleting a vertex of degree d lowers the cycle rank by at most d - 1,
    /// so each component needs enough undecided degree to cover its rank.
    fn fvs_lower_bound(&self, core: u128, und: u128) -> u32 {
        let mut total = 0;
        let mut rest = core;
        while rest != 0 {
            let comp = self.component(rest.trailing_zeros() as usize, core);
            rest &= !comp;
            let v = comp.count_ones() as i64;
            let e = bits(comp).map(|x| (self.nb[x] & comp).count_ones() as i64).sum::<i64>() / 2;
            let mut rank = e - v + 1;
            if rank <= 0 {
                continue;
            }
            let mut degs: Vec<i64> = bits(comp & und)
                .map(|x| (self.nb[x] & comp).count_ones() as i64 - 1)
                .collect();
            degs.sort_unstable_by(|a, b| b.cmp(a));
            for d in degs {
                if rank <= 0 {
                    break;
                }
                rank -= d;
                total += 1;
            }
        }
        total
    }
}
