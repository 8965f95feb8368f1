//! Builds large induced forests by recursing through reductions whose lifts
//! are checked at runtime, falling back to a greedy pass and a budgeted
//! exact search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::Context;
use crate::embedding::PlaneGraph;
use crate::graph::{Graph, IdMap, VertexSet};
use crate::inequality::bound;
use crate::reduction::{apply_step, lift_with_map, prepare_child_forest, r_step, ReductionStep, StepKind};
use crate::solver::{target_for, ForestCertificate, Solver, SolverError};

/// Subproblems at or below this size are solved exactly.
pub const EXACT_CUTOFF: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum BuildRule {
    Exact { n: usize },
    Components { count: usize },
    LowDegree,
    Chord { face_len: usize },
    Reduction { kind: StepKind, recipe: String },
    Greedy { n: usize },
    ExactFallback { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub certificate: ForestCertificate,
    pub n: usize,
    pub target: usize,
    pub meets_target: bool,
    pub rule_chain: Vec<BuildRule>,
    /// Some subproblem needed the greedy pass or the budgeted search.
    pub fallback_used: bool,
    /// Some budgeted search ran out; the greedy forest was kept there.
    pub budget_exceeded: bool,
    pub lift_failures: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Builder {
    pub exact_cutoff: usize,
    pub solver: Solver,
}

impl Default for Builder {
    fn default() -> Self {
        Builder {
            exact_cutoff: EXACT_CUTOFF,
            solver: Solver::default(),
        }
    }
}

#[derive(Default)]
struct Trace {
    chain: Vec<BuildRule>,
    fallback: bool,
    over_budget: bool,
    lift_failures: usize,
}

impl Trace {
    fn absorb(&mut self, other: Trace) {
        self.chain.extend(other.chain);
        self.fallback |= other.fallback;
        self.over_budget |= other.over_budget;
        self.lift_failures += other.lift_failures;
    }
}

pub fn build_forest(pg: &PlaneGraph) -> Result<BuildReport, SolverError> {
    Builder::default().build(pg)
}

impl Builder {
    pub fn build(&self, pg: &PlaneGraph) -> Result<BuildReport, SolverError> {
        let mut trace = Trace::default();
        let set = self.rec(pg, &mut trace, 0)?;
        let g = pg.graph();
        debug_assert!(g.induces_forest(&set));
        let certificate = ForestCertificate::new(g, set);
        let target = target_for(g.n());
        Ok(BuildReport {
            n: g.n(),
            target,
            meets_target: certificate.size >= target,
            certificate,
            rule_chain: trace.chain,
            fallback_used: trace.fallback,
            budget_exceeded: trace.over_budget,
            lift_failures: trace.lift_failures,
        })
    }

    // Every rule deletes or merges a vertex, or adds a chord inside a face of
    // length at least 6, so the recursion terminates.
    fn rec(&self, pg: &PlaneGraph, trace: &mut Trace, depth: usize) -> Result<VertexSet, SolverError> {
        let g = pg.graph();
        let n = g.n();
        if n == 0 {
            return Ok(VertexSet::new());
        }
        if n <= self.exact_cutoff {
            trace.chain.push(BuildRule::Exact { n });
            return Ok(self.solver.solve_any(g)?.vertices);
        }
        let comps = g.components();
        if comps.len() > 1 {
            trace.chain.push(BuildRule::Components { count: comps.len() });
            let results: Vec<Result<(VertexSet, Trace), SolverError>> = comps
                .par_iter()
                .map(|comp| {
                    let keep: VertexSet = comp.iter().copied().collect();
                    let (sub, map) = pg.delete_vertices(&g.all_vertices().difference(&keep)).expect("subgraph");
                    let mut t = Trace::default();
                    let f = self.rec(&sub, &mut t, depth + 1)?;
                    Ok((pull_back(&map, &f, n), t))
                })
                .collect();
            let mut out = VertexSet::new();
            for r in results {
                let (f, t) = r?;
                out.union_with(&f);
                trace.absorb(t);
            }
            return Ok(out);
        }
        if let Some(v) = (0..n).find(|&v| g.degree(v) <= 1) {
            trace.chain.push(BuildRule::LowDegree);
            let (sub, map) = pg.delete_vertices(&std::iter::once(v).collect()).expect("delete");
            let mut f = pull_back(&map, &self.rec(&sub, trace, depth + 1)?, n);
            f.insert(v);
            return Ok(f);
        }
        if let Some(face) = pg.trace_faces().into_iter().find(|f| f.len() >= 6) {
            if let Ok(next) = pg.add_chord(&face) {
                trace.chain.push(BuildRule::Chord { face_len: face.len() });
                return self.rec(&next, trace, depth + 1);
            }
        }
        for step in self.candidate_steps(pg) {
            let Ok((child, map)) = apply_step(pg, &step) else { continue };
            let mut sub = Trace::default();
            let child_f = self.rec(&child, &mut sub, depth + 1)?;
            let child_f = prepare_child_forest(child.graph(), &step, &map, &child_f);
            match lift_with_map(g, &step, &map, &child_f) {
                Ok(cert) => {
                    trace.chain.push(BuildRule::Reduction {
                        kind: step.kind,
                        recipe: step.recipe.clone(),
                    });
                    trace.absorb(sub);
                    return Ok(cert.vertices);
                }
                Err(_) => trace.lift_failures += 1,
            }
        }
        self.fallback(g, trace)
    }

    /// Sound steps that keep the bound locally, catalog suggestions first,
    /// then single targets and pair targets.
    fn candidate_steps(&self, pg: &PlaneGraph) -> Vec<ReductionStep> {
        let g = pg.graph();
        let n = g.n();
        let keeps_bound = |s: &ReductionStep| {
            let child = s.child_order(n);
            let have = if child == 0 { 0 } else { bound(child).unwrap_or(0) };
            have + s.credit >= bound(n).unwrap_or(0)
        };
        let ctx = Context::new(pg);
        let mut out: Vec<ReductionStep> = ctx
            .detect()
            .into_iter()
            .filter_map(|h| h.suggested_step)
            .filter(|s| keeps_bound(s) && s.is_structurally_sound(g))
            .collect();
        for v in 0..n {
            for e in ctx.r_empty_set(v).elements() {
                let s = r_step(pg, v, &e);
                if keeps_bound(&s) && s.is_structurally_sound(g) {
                    out.push(s);
                }
            }
        }
        out
    }

    fn fallback(&self, g: &Graph, trace: &mut Trace) -> Result<VertexSet, SolverError> {
        trace.fallback = true;
        let n = g.n();
        let greedy = greedy_forest(g);
        if greedy.len() >= target_for(n) {
            trace.chain.push(BuildRule::Greedy { n });
            return Ok(greedy);
        }
        match self.solver.solve_any(g).map(|c| c.vertices) {
            Ok(f) if f.len() >= greedy.len() => {
                trace.chain.push(BuildRule::ExactFallback { n });
                Ok(f)
            }
            Ok(_) => Ok(greedy),
            Err(SolverError::BudgetExceeded(_)) | Err(SolverError::TooLarge { .. }) => {
                trace.over_budget = true;
                trace.chain.push(BuildRule::Greedy { n });
                Ok(greedy)
            }
            Err(e) => Err(e),
        }
    }
}

fn pull_back(map: &IdMap, f: &VertexSet, n: usize) -> VertexSet {
    (0..n).filter(|&v| map.get(v).is_some_and(|c| f.contains(c))).collect()
}

/// Peels vertices of degree at most 1 into the forest and deletes a
/// maximum-degree vertex when stuck, then re-adds deleted vertices that
/// close no cycle.
pub fn greedy_forest(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut alive = g.all_vertices();
    let mut forest = VertexSet::new();
    let mut deleted = Vec::new();
    let live_deg = |v: usize, alive: &VertexSet| g.neighbors(v).intersection_len(alive);
    while !alive.is_empty() {
        let peel = alive.iter().find(|&v| live_deg(v, &alive) <= 1);
        if let Some(v) = peel {
            alive.remove(v);
            forest.insert(v);
            continue;
        }
        let v = alive
            .iter()
            .max_by_key(|&v| (live_deg(v, &alive), std::cmp::Reverse(v)))
            .expect("nonempty");
        alive.remove(v);
        deleted.push(v);
    }
    for v in deleted.into_iter().rev() {
        forest.insert(v);
        if !g.induces_forest(&forest) {
            forest.remove(v);
        }
    }
    debug_assert!(forest.iter().all(|v| v < n));
    forest
}
