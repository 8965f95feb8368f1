//! Reduction targets around a vertex, reduction steps (delete, identify,
//! add edges), forest lifts back to the parent, and exact certification.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::ConfigTag;
use crate::embedding::{EmbeddingError, PlaneGraph};
use crate::graph::{Graph, GraphError, IdMap, Vertex, VertexSet};
use crate::solver::{ForestCertificate, Solver, SolverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("lifted set contains the cycle {cycle:?}")]
    LiftFailed { cycle: Vec<Vertex> },
    #[error("invalid step: {0}")]
    BadStep(String),
}

/// One member of the reduction family at a center vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RElement {
    /// A neighbor of degree at most 2.
    Single(Vertex),
    /// Two degree-3 neighbors on a 4-face `v r1 w r2`, with `r1 < r2`.
    Pair { r1: Vertex, r2: Vertex, w: Vertex },
}

impl RElement {
    pub fn members(&self) -> Vec<Vertex> {
        match *self {
            RElement::Single(r) => vec![r],
            RElement::Pair { r1, r2, .. } => vec![r1, r2],
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members().contains(&v)
    }

    pub fn intersects(&self, other: &RElement) -> bool {
        self.members().iter().any(|&v| other.contains(v))
    }
}

/// The reduction family of `center`, excluding targets that meet `excluded`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RSet {
    pub center: Vertex,
    pub excluded: VertexSet,
    pub singles: Vec<Vertex>,
    pub pairs: Vec<(Vertex, Vertex, Vertex)>,
}

impl RSet {
    pub fn is_empty(&self) -> bool {
        self.singles.is_empty() && self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.singles.len() + self.pairs.len()
    }

    pub fn elements(&self) -> Vec<RElement> {
        let mut out: Vec<RElement> = self.singles.iter().map(|&r| RElement::Single(r)).collect();
        out.extend(
            self.pairs
                .iter()
                .map(|&(r1, r2, w)| RElement::Pair { r1, r2, w }),
        );
        out
    }

    /// Two elements with no common vertex, if any exist.
    pub fn disjoint_pair(&self) -> Option<(RElement, RElement)> {
        let els = self.elements();
        for (i, a) in els.iter().enumerate() {
            if let Some(b) = els[i + 1..].iter().find(|b| !a.intersects(b)) {
                return Some((*a, *b));
            }
        }
        None
    }
}

pub fn compute_r(pg: &PlaneGraph, v: Vertex, excluded: &VertexSet) -> RSet {
    let g = pg.graph();
    let mut singles: Vec<Vertex> = g
        .neighbors(v)
        .iter()
        .filter(|&r| !excluded.contains(r) && g.degree(r) <= 2)
        .collect();
    singles.sort_unstable();
    let mut pairs: Vec<(Vertex, Vertex, Vertex)> = Vec::new();
    for (a, w, b) in pg.cofacial_quads(v) {
        let (r1, r2) = (a.min(b), a.max(b));
        if excluded.contains(r1) || excluded.contains(r2) {
            continue;
        }
        if g.degree(r1) != 3 || g.degree(r2) != 3 {
            continue;
        }
        if !pairs.iter().any(|p| (p.0, p.1) == (r1, r2)) {
            pairs.push((r1, r2, w));
        }
    }
    pairs.sort_unstable();
    RSet {
        center: v,
        excluded: excluded.clone(),
        singles,
        pairs,
    }
}

/// Where a step came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    Identity,
    RSingle,
    RPair,
    Config(ConfigTag),
}

/// A reduction: delete `removed`, identify each group, add `added_edges`
/// (child ids). Lifting a child forest adds `lift_add`, and for each group
/// whose merged vertex is in the child forest, expands it to the group and
/// drops that group's `lift_drop_if_merged`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub recipe: String,
    pub removed: VertexSet,
    pub identified: Vec<VertexSet>,
    pub added_edges: Vec<(Vertex, Vertex)>,
    pub lift_add: VertexSet,
    pub lift_drop_if_merged: Vec<VertexSet>,
    pub credit: usize,
}

impl ReductionStep {
    pub fn identity() -> ReductionStep {
        ReductionStep {
            kind: StepKind::Identity,
            recipe: "identity".into(),
            removed: VertexSet::new(),
            identified: vec![],
            added_edges: vec![],
            lift_add: VertexSet::new(),
            lift_drop_if_merged: vec![],
            credit: 0,
        }
    }

    /// Delete `removed` and re-insert `lift_add` afterwards.
    pub fn deletion(kind: StepKind, recipe: &str, removed: VertexSet, lift_add: VertexSet) -> ReductionStep {
        ReductionStep {
            kind,
            recipe: recipe.into(),
            credit: lift_add.len(),
            removed,
            identified: vec![],
            added_edges: vec![],
            lift_add,
            lift_drop_if_merged: vec![],
        }
    }

    pub fn with_identification(
        kind: StepKind,
        recipe: &str,
        removed: VertexSet,
        groups: Vec<(VertexSet, VertexSet)>,
        lift_add: VertexSet,
    ) -> ReductionStep {
        let (identified, drops): (Vec<_>, Vec<_>) = groups.into_iter().unzip();
        let mut step = ReductionStep {
            kind,
            recipe: recipe.into(),
            removed,
            identified,
            added_edges: vec![],
            lift_add,
            lift_drop_if_merged: drops,
            credit: 0,
        };
        step.credit = step.claimed_gain();
        step
    }

    /// `|lift_add|` plus, per group, `|group| - 1 - |drop|`: the size gain
    /// when every merged vertex lies in the child forest.
    pub fn claimed_gain(&self) -> usize {
        let groups: isize = self
            .identified
            .iter()
            .zip(&self.lift_drop_if_merged)
            .map(|(g, d)| g.len() as isize - 1 - d.len() as isize)
            .sum();
        (self.lift_add.len() as isize + groups).max(0) as usize
    }

    /// Vertex count of the child graph.
    pub fn child_order(&self, parent_n: usize) -> usize {
        parent_n - self.removed.len() - self.identified.iter().map(|g| g.len().saturating_sub(1)).sum::<usize>()
    }

    fn members(&self) -> VertexSet {
        let mut all = VertexSet::new();
        for g in &self.identified {
            all.union_with(g);
        }
        all
    }

    /// Shape checks independent of acyclicity.
    pub fn validate(&self, g: &Graph) -> Result<(), ReductionError> {
        let n = g.n();
        let bad = |m: &str| Err(ReductionError::BadStep(m.into()));
        if self.removed.iter().chain(self.lift_add.iter()).any(|v| v >= n) {
            return bad("vertex out of range");
        }
        if self.identified.len() != self.lift_drop_if_merged.len() {
            return bad("one drop set per group is required");
        }
        let mut seen = self.removed.clone();
        for (grp, drop) in self.identified.iter().zip(&self.lift_drop_if_merged) {
            if grp.iter().any(|v| v >= n || !seen.insert(v)) {
                return bad("groups must be disjoint from each other and from removed vertices");
            }
            if !drop.is_subset(&self.lift_add) {
                return bad("drop set must be part of lift_add");
            }
        }
        if !self.lift_add.is_subset(&self.removed) {
            return bad("lift_add must consist of removed vertices");
        }
        Ok(())
    }

    /// Sufficient condition for every lift to be a forest, whatever the
    /// child forest is. For each pattern of merged vertices inside the child
    /// forest:
    /// * the re-inserted vertices induce a forest and each of its components
    ///   touches the present vertices through a single child vertex, by one
    ///   edge per parent vertex;
    /// * expanding a merged vertex creates at most one edge beyond what the
    ///   child already had, counting edges from re-inserted components.
    ///
    /// Groups whose expansion gains size need their merged vertex in the
    /// child forest; at most one such group is allowed and its merged vertex
    /// must have child degree at most 3, where a maximum forest through it
    /// always exists.
    pub fn is_structurally_sound(&self, g: &Graph) -> bool {
        if self.validate(g).is_err() || self.credit > self.claimed_gain() {
            return false;
        }
        let gaining: Vec<usize> = (0..self.identified.len())
            .filter(|&i| self.identified[i].len() > 1 + self.lift_drop_if_merged[i].len())
            .collect();
        if gaining.len() > 1 {
            return false;
        }
        if let Some(&i) = gaining.first() {
            let mut outside = VertexSet::new();
            for v in self.identified[i].iter() {
                outside.union_with(&g.neighbors(v).difference(&self.removed));
            }
            if outside.len() > 3 {
                return false;
            }
        }
        let members = self.members();
        let k = self.identified.len();
        (0..(1usize << k)).all(|subset| {
            let merged: Vec<usize> = (0..k).filter(|i| subset >> i & 1 == 1).collect();
            let mut add = self.lift_add.clone();
            let mut present: VertexSet = (0..g.n())
                .filter(|&v| !self.removed.contains(v) && !members.contains(v))
                .collect();
            for &i in &merged {
                add = add.difference(&self.lift_drop_if_merged[i]);
                present.union_with(&self.identified[i]);
            }
            self.subset_sound(g, &merged, &add, &present)
        })
    }

    fn subset_sound(&self, g: &Graph, merged: &[usize], add: &VertexSet, present: &VertexSet) -> bool {
        if !g.induces_forest(add) {
            return false;
        }
        // Child-level unit of a present vertex: its group if merged, else itself.
        let unit = |v: Vertex| -> Unit {
            match merged.iter().find(|&&i| self.identified[i].contains(v)) {
                Some(&i) => Unit::Group(i),
                None => Unit::Plain(v),
            }
        };
        let mut extras = vec![0usize; self.identified.len()];
        for comp in components_of(g, add) {
            let mut hits: Vec<Vertex> = Vec::new();
            for &u in &comp {
                hits.extend(g.neighbors(u).intersection(present).iter());
            }
            let Some(&first) = hits.first() else { continue };
            let target = unit(first);
            if hits.iter().any(|&h| unit(h) != target) {
                return false;
            }
            match target {
                Unit::Plain(_) if hits.len() > 1 => return false,
                Unit::Plain(_) => {}
                Unit::Group(i) => {
                    let mut distinct = hits.clone();
                    distinct.sort_unstable();
                    distinct.dedup();
                    if distinct.len() != hits.len() {
                        return false;
                    }
                    extras[i] += hits.len() - 1;
                }
            }
        }
        for &i in merged {
            let grp = &self.identified[i];
            let mut per_unit: std::collections::BTreeMap<Unit, usize> = Default::default();
            for u in present.iter().filter(|&u| !grp.contains(u)) {
                let c = g.neighbors(u).intersection_len(grp);
                if c > 0 {
                    *per_unit.entry(unit(u)).or_default() += c;
                }
            }
            extras[i] += per_unit.values().map(|c| c - 1).sum::<usize>();
            if extras[i] > 1 {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Unit {
    Plain(Vertex),
    Group(usize),
}

fn components_of(g: &Graph, s: &VertexSet) -> Vec<Vec<Vertex>> {
    let mut seen = VertexSet::new();
    let mut out = Vec::new();
    for v in s.iter() {
        if !seen.insert(v) {
            continue;
        }
        let mut comp = vec![v];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for w in g.neighbors(u).iter() {
                if s.contains(w) && seen.insert(w) {
                    comp.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// `G[add]` is a forest and each of its components has at most one edge
/// into `present`.
pub fn pendant_attachments_ok(g: &Graph, add: &VertexSet, present: &VertexSet) -> bool {
    g.induces_forest(add)
        && components_of(g, add)
            .iter()
            .all(|c| c.iter().map(|&u| g.neighbors(u).intersection_len(present)).sum::<usize>() <= 1)
}

/// Grows the deletion set until every component of `lift_add` hangs off the
/// rest by at most one edge. Used when a recipe's preconditions fail.
pub fn soundify(g: &Graph, kind: StepKind, recipe: &str, mut removed: VertexSet, lift_add: VertexSet) -> ReductionStep {
    removed.union_with(&lift_add);
    loop {
        let present: VertexSet = (0..g.n()).filter(|&v| !removed.contains(v)).collect();
        if pendant_attachments_ok(g, &lift_add, &present) {
            return ReductionStep::deletion(kind, recipe, removed, lift_add);
        }
        // Remove every outside neighbor of the first offending component.
        let mut grew = false;
        for v in lift_add.iter() {
            let outside = g.neighbors(v).intersection(&present);
            if !outside.is_empty() {
                removed.union_with(&outside);
                grew = true;
                break;
            }
        }
        if !grew {
            // lift_add itself has a cycle; nothing can fix that.
            return ReductionStep::deletion(kind, recipe, removed, VertexSet::new());
        }
    }
}

/// The step for one reduction target at `v`.
pub fn r_step(pg: &PlaneGraph, v: Vertex, elem: &RElement) -> ReductionStep {
    let _ = pg;
    match *elem {
        RElement::Single(r) => ReductionStep::deletion(
            StepKind::RSingle,
            "single target",
            [v, r].into_iter().collect(),
            std::iter::once(r).collect(),
        ),
        RElement::Pair { r1, r2, .. } => ReductionStep::with_identification(
            StepKind::RPair,
            "pair target",
            std::iter::once(v).collect(),
            vec![([r1, r2].into_iter().collect(), VertexSet::new())],
            VertexSet::new(),
        ),
    }
}

/// Child graph of a step, computed without the embedding.
pub fn apply_step_graph(g: &Graph, step: &ReductionStep) -> Result<(Graph, IdMap), ReductionError> {
    step.validate(g)?;
    let (h, m1) = g.delete_vertices(&step.removed)?;
    let groups: Vec<VertexSet> = step
        .identified
        .iter()
        .map(|grp| grp.iter().map(|v| m1.get(v).expect("kept")).collect())
        .collect();
    let (mut h, m2) = h.identify(&groups)?;
    for &(a, b) in &step.added_edges {
        h = h.add_edge(a, b)?;
    }
    Ok((h, m1.then(&m2)))
}

/// Child plane graph of a step. Groups must be cofacial once the removed
/// vertices are gone; added edges must share a face in the child.
pub fn apply_step(pg: &PlaneGraph, step: &ReductionStep) -> Result<(PlaneGraph, IdMap), ReductionError> {
    step.validate(pg.graph())?;
    let (h, m1) = pg.delete_vertices(&step.removed)?;
    let groups: Vec<VertexSet> = step
        .identified
        .iter()
        .map(|grp| grp.iter().map(|v| m1.get(v).expect("kept")).collect())
        .collect();
    let (mut h, m2) = h.identify_groups(&groups)?;
    for &(a, b) in &step.added_edges {
        h = h.add_edge_in_face(a, b)?;
    }
    Ok((h, m1.then(&m2)))
}

/// `G * R` for a reduction target, plus the id map and the merged vertex
/// for pair targets.
pub fn star_reduce(
    pg: &PlaneGraph,
    v: Vertex,
    elem: &RElement,
) -> Result<(PlaneGraph, IdMap, Option<Vertex>), ReductionError> {
    let rset = compute_r(pg, v, &VertexSet::new());
    if !rset.elements().contains(elem) {
        return Err(ReductionError::BadStep(format!("{elem:?} is not a target at {v}")));
    }
    let step = r_step(pg, v, elem);
    let (child, map) = apply_step(pg, &step)?;
    let merged = match elem {
        RElement::Pair { r1, .. } => map.get(*r1),
        RElement::Single(_) => None,
    };
    Ok((child, map, merged))
}

/// Moves `v` into the forest `f` without shrinking it: add it if that stays
/// acyclic, otherwise trade one forest vertex for it. Always succeeds when
/// `deg(v) <= 3`; otherwise `f` may come back unchanged.
pub fn force_vertex(g: &Graph, f: &VertexSet, v: Vertex) -> VertexSet {
    if f.contains(v) {
        return f.clone();
    }
    let mut with_v = f.clone();
    with_v.insert(v);
    if g.induces_forest(&with_v) {
        return with_v;
    }
    for w in f.iter() {
        let mut cand = with_v.clone();
        cand.remove(w);
        if g.induces_forest(&cand) {
            return cand;
        }
    }
    f.clone()
}

/// Translates a child forest into the parent along `step`. The result is
/// checked for cycles; its size is the real size, which equals the child
/// size plus the credit whenever every merged vertex was in the child forest.
pub fn lift_forest(
    parent: &PlaneGraph,
    step: &ReductionStep,
    child_f: &ForestCertificate,
) -> Result<ForestCertificate, ReductionError> {
    let (_, map) = apply_step_graph(parent.graph(), step)?;
    lift_with_map(parent.graph(), step, &map, &child_f.vertices)
}

pub(crate) fn lift_with_map(
    g: &Graph,
    step: &ReductionStep,
    map: &IdMap,
    child: &VertexSet,
) -> Result<ForestCertificate, ReductionError> {
    let mut out = VertexSet::new();
    let members = step.members();
    for v in 0..g.n() {
        if step.removed.contains(v) || members.contains(v) {
            continue;
        }
        if map.get(v).is_some_and(|c| child.contains(c)) {
            out.insert(v);
        }
    }
    let mut drops = VertexSet::new();
    for (grp, drop) in step.identified.iter().zip(&step.lift_drop_if_merged) {
        let first = grp.iter().next().expect("nonempty group");
        if map.get(first).is_some_and(|c| child.contains(c)) {
            out.union_with(grp);
            drops.union_with(drop);
        }
    }
    out.union_with(&step.lift_add.difference(&drops));
    if let Some(cycle) = g.find_cycle_in(&out) {
        return Err(ReductionError::LiftFailed { cycle });
    }
    Ok(ForestCertificate::new(g, out))
}

/// Child forest adjusted so every merged vertex of positive gain is in it.
pub(crate) fn prepare_child_forest(child: &Graph, step: &ReductionStep, map: &IdMap, f: &VertexSet) -> VertexSet {
    let mut f = f.clone();
    for (grp, drop) in step.identified.iter().zip(&step.lift_drop_if_merged) {
        if grp.len() <= 1 + drop.len() {
            continue;
        }
        let m = map.get(grp.iter().next().expect("nonempty")).expect("merged vertex");
        if child.degree(m) <= 3 {
            f = force_vertex(child, &f, m);
        }
    }
    f
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub kind: StepKind,
    pub recipe: String,
    pub n_parent: usize,
    pub n_child: usize,
    pub a_parent: usize,
    pub a_child: usize,
    pub credit: usize,
    pub ok: bool,
    /// The child optimum lifted to a parent forest of size `a_child + credit`.
    pub lift_verified: bool,
}

/// Exact check of `a(parent) >= a(child) + credit`.
pub fn certify_reduction(pg: &PlaneGraph, step: &ReductionStep) -> Result<CertificationReport, ReductionError> {
    certify_with(&Solver::default(), pg.graph(), step)
}

pub fn certify_with(solver: &Solver, g: &Graph, step: &ReductionStep) -> Result<CertificationReport, ReductionError> {
    let (child, map) = apply_step_graph(g, step)?;
    let a_parent = solver.solve(g)?.size;
    let child_cert = solver.solve(&child)?;
    let a_child = child_cert.size;
    let f = prepare_child_forest(&child, step, &map, &child_cert.vertices);
    let lift_verified = f.len() == a_child
        && lift_with_map(g, step, &map, &f).is_ok_and(|c| c.size == a_child + step.credit);
    Ok(CertificationReport {
        kind: step.kind,
        recipe: step.recipe.clone(),
        n_parent: g.n(),
        n_child: child.n(),
        a_parent,
        a_child,
        credit: step.credit,
        ok: a_parent >= a_child + step.credit,
        lift_verified,
    })
}
