//! Local configurations that a smallest graph violating the forest bound
//! cannot contain, a classifier for the neighborhoods of 5- and 6-vertices,
//! and reduction steps suggested for the configurations that have one.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embedding::PlaneGraph;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::inequality::bound;
use crate::reduction::{compute_r, soundify, RElement, RSet, ReductionStep, StepKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConfigTag {
    TwoDisjointR,
    Deg2Profile,
    Edge434,
    LowDegPath,
    DoubleRAt3,
    WeakPlusR,
    AllWeak3,
    FiveTwoBFace,
    Mixed345,
    FiveTwoBLadder,
    FiveOneBWheel,
    SixTwoATwin,
    CCadjB,
    CCadjA,
    CCadjB2,
}

impl ConfigTag {
    pub const ALL: [ConfigTag; 15] = [
        ConfigTag::TwoDisjointR,
        ConfigTag::Deg2Profile,
        ConfigTag::Edge434,
        ConfigTag::LowDegPath,
        ConfigTag::DoubleRAt3,
        ConfigTag::WeakPlusR,
        ConfigTag::AllWeak3,
        ConfigTag::FiveTwoBFace,
        ConfigTag::Mixed345,
        ConfigTag::FiveTwoBLadder,
        ConfigTag::FiveOneBWheel,
        ConfigTag::SixTwoATwin,
        ConfigTag::CCadjB,
        ConfigTag::CCadjA,
        ConfigTag::CCadjB2,
    ];
}

impl fmt::Display for ConfigTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigHit {
    pub tag: ConfigTag,
    /// Sorted configuration vertices.
    pub witness: VertexSet,
    /// The vertex the pattern is anchored at.
    pub center: Vertex,
    /// Extra state worth reporting, e.g. the target sets next to a 2-vertex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suggested_step: Option<ReductionStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexType {
    #[serde(rename = "5-2-A")]
    FiveTwoA,
    #[serde(rename = "5-2-B")]
    FiveTwoB,
    #[serde(rename = "5-2-C")]
    FiveTwoC,
    #[serde(rename = "5-1-A")]
    FiveOneA,
    #[serde(rename = "5-1-B")]
    FiveOneB,
    #[serde(rename = "5-0")]
    FiveZero,
    #[serde(rename = "6-3")]
    SixThree,
    #[serde(rename = "6-2-A")]
    SixTwoA,
    #[serde(rename = "6-2-B")]
    SixTwoB,
    #[serde(rename = "6-1")]
    SixOne,
    #[serde(rename = "6-0")]
    SixZero,
    #[serde(rename = "other")]
    Other,
}

impl VertexType {
    pub fn label(&self) -> &'static str {
        match self {
            VertexType::FiveTwoA => "5-2-A",
            VertexType::FiveTwoB => "5-2-B",
            VertexType::FiveTwoC => "5-2-C",
            VertexType::FiveOneA => "5-1-A",
            VertexType::FiveOneB => "5-1-B",
            VertexType::FiveZero => "5-0",
            VertexType::SixThree => "6-3",
            VertexType::SixTwoA => "6-2-A",
            VertexType::SixTwoB => "6-2-B",
            VertexType::SixOne => "6-1",
            VertexType::SixZero => "6-0",
            VertexType::Other => "other",
        }
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexTypeLabel {
    pub vertex: Vertex,
    pub label: VertexType,
}

/// Cached degrees and target sets for one plane graph.
pub struct Context<'a> {
    pub pg: &'a PlaneGraph,
    pub g: &'a Graph,
    deg: Vec<usize>,
    r0: Vec<RSet>,
}

impl<'a> Context<'a> {
    pub fn new(pg: &'a PlaneGraph) -> Context<'a> {
        let g = pg.graph();
        let deg = (0..g.n()).map(|v| g.degree(v)).collect();
        let r0 = (0..g.n()).map(|v| compute_r(pg, v, &VertexSet::new())).collect();
        Context { pg, g, deg, r0 }
    }

    pub fn deg(&self, v: Vertex) -> usize {
        self.deg[v]
    }

    pub fn r_empty_set(&self, v: Vertex) -> &RSet {
        &self.r0[v]
    }

    /// Targets at `v` avoiding every vertex of `excl`.
    pub fn r_elements(&self, v: Vertex, excl: &[Vertex]) -> Vec<RElement> {
        self.r0[v]
            .elements()
            .into_iter()
            .filter(|e| excl.iter().all(|&u| !e.contains(u)))
            .collect()
    }

    pub fn r_nonempty(&self, v: Vertex, excl: &[Vertex]) -> bool {
        !self.r_elements(v, excl).is_empty()
    }

    /// `w` has degree at most 4 or has a target avoiding `u`.
    pub fn weak(&self, w: Vertex, u: Vertex) -> bool {
        self.deg[w] <= 4 || self.r_nonempty(w, &[u])
    }

    /// Both neighbors of the 3-vertex `u` other than `x` are weak relative to `u`.
    pub fn all_weak(&self, u: Vertex, x: Vertex) -> bool {
        self.g.neighbors(u).iter().filter(|&t| t != x).all(|t| self.weak(t, u))
    }

    fn rot(&self, v: Vertex) -> &[Vertex] {
        self.pg.rotation(v)
    }

    /// Fourth vertex of the 4-face through `v` between neighbors `a` and `b`.
    fn opp(&self, v: Vertex, a: Vertex, b: Vertex) -> Option<Vertex> {
        self.pg.face_opposite(v, a, b)
    }

    /// Neighbors of `v` in rotation order starting at index `start`, walking
    /// forwards or backwards.
    fn walk(&self, v: Vertex, start: usize, forward: bool) -> Vec<Vertex> {
        let r = self.rot(v);
        let k = r.len();
        (0..k)
            .map(|t| if forward { r[(start + t) % k] } else { r[(start + k - t) % k] })
            .collect()
    }

    pub fn classify(&self, v: Vertex) -> VertexType {
        let d = self.deg[v];
        if d != 5 && d != 6 {
            return VertexType::Other;
        }
        let r = self.rot(v);
        if r.iter().any(|&u| self.deg[u] < 3) {
            return VertexType::Other;
        }
        let threes: Vec<usize> = (0..d).filter(|&i| self.deg[r[i]] == 3).collect();
        let gap = |a: usize, b: usize| -> usize {
            let t = (b + d - a) % d;
            t.min(d - t)
        };
        if d == 5 {
            return match threes.as_slice() {
                [] => VertexType::FiveZero,
                [i] => {
                    if self.all_weak(r[*i], v) {
                        VertexType::FiveOneA
                    } else {
                        VertexType::FiveOneB
                    }
                }
                [i, j] if gap(*i, *j) == 2 => match (self.all_weak(r[*i], v), self.all_weak(r[*j], v)) {
                    (true, true) => VertexType::FiveTwoA,
                    (false, false) => VertexType::FiveTwoC,
                    _ => VertexType::FiveTwoB,
                },
                _ => VertexType::Other,
            };
        }
        match threes.as_slice() {
            [] => VertexType::SixZero,
            [_] => VertexType::SixOne,
            [i, j] if gap(*i, *j) == 2 => VertexType::SixTwoA,
            [i, j] if gap(*i, *j) == 3 => VertexType::SixTwoB,
            [i, j, k] if gap(*i, *j) == 2 && gap(*j, *k) == 2 && gap(*i, *k) == 2 => VertexType::SixThree,
            _ => VertexType::Other,
        }
    }

    pub fn detect(&self) -> Vec<ConfigHit> {
        let mut hits = Vec::new();
        self.two_disjoint_r(&mut hits);
        self.deg2_profile(&mut hits);
        self.edge434(&mut hits);
        self.low_deg_path(&mut hits);
        self.three_vertex_rules(&mut hits);
        self.five_two_b_face(&mut hits);
        self.five_two_b_ladder(&mut hits);
        self.five_one_b_wheel(&mut hits);
        self.six_two_a_twin(&mut hits);
        self.cc_adjacent(&mut hits);
        let mut seen = BTreeSet::new();
        hits.retain(|h| seen.insert((h.tag, h.witness.to_vec())));
        hits.sort_by(|a, b| (a.tag, a.witness.to_vec()).cmp(&(b.tag, b.witness.to_vec())));
        hits
    }

    fn hit(&self, tag: ConfigTag, center: Vertex, witness: &[Vertex], step: Option<ReductionStep>) -> ConfigHit {
        ConfigHit {
            tag,
            witness: witness.iter().copied().collect(),
            center,
            note: None,
            suggested_step: step,
        }
    }

    fn two_disjoint_r(&self, hits: &mut Vec<ConfigHit>) {
        for v in 0..self.g.n() {
            let Some((a, b)) = self.r0[v].disjoint_pair() else { continue };
            let mut witness = vec![v];
            let mut removed = vec![v];
            let mut add = vec![];
            for e in [a, b] {
                match e {
                    RElement::Single(r) => {
                        witness.push(r);
                        removed.push(r);
                        add.push(r);
                    }
                    RElement::Pair { r1, r2, w } => {
                        witness.extend([r1, r2, w]);
                        removed.extend([r1, r2, w]);
                        add.extend([r1, r2]);
                    }
                }
            }
            let step = self.deletion(ConfigTag::TwoDisjointR, "two disjoint targets", &removed, &add);
            hits.push(self.hit(ConfigTag::TwoDisjointR, v, &witness, Some(step)));
        }
    }

    fn deg2_profile(&self, hits: &mut Vec<ConfigHit>) {
        for y in 0..self.g.n() {
            if self.deg[y] != 2 {
                continue;
            }
            let nb = self.g.neighbors(y).to_vec();
            let (mut x, mut z) = (nb[0], nb[1]);
            if (self.deg[x], x) > (self.deg[z], z) {
                std::mem::swap(&mut x, &mut z);
            }
            let (p, q) = (self.deg[x], self.deg[z]);
            if !(p <= 4 && q <= 5) {
                continue;
            }
            let only_y = |t: Vertex| self.r0[t].elements() == vec![RElement::Single(y)];
            let mut hit = self.hit(ConfigTag::Deg2Profile, y, &[x, y, z], self.deg2_step(x, y, z));
            hit.note = Some(format!(
                "degrees ({p},{q}); sole target at {x}: {}; sole target at {z}: {}",
                only_y(x),
                only_y(z)
            ));
            hits.push(hit);
        }
    }

    fn deg2_step(&self, x: Vertex, y: Vertex, z: Vertex) -> Option<ReductionStep> {
        let tag = ConfigTag::Deg2Profile;
        let others = |a: Vertex, skip: &[Vertex]| -> Vec<Vertex> {
            self.g.neighbors(a).iter().filter(|t| !skip.contains(t)).collect()
        };
        let (p, q) = (self.deg[x], self.deg[z]);
        let mut cands = Vec::new();
        if p <= 2 {
            cands.push(self.deletion(tag, "adjacent 2-vertices", &[x, y, z], &[x, y]));
        } else if p == 3 {
            let xs = others(x, &[y]);
            if q <= 4 {
                let mut rem = vec![x, y, z];
                rem.extend(&xs);
                cands.push(self.deletion(tag, "3-2-4 path", &rem, &[x, y, z]));
            } else {
                for (x1, x2) in [(xs[0], xs[1]), (xs[1], xs[0])] {
                    let Some(z1) = self.rot_neighbor_except(z, x1, y) else { continue };
                    if self.g.neighbors(x1).intersection_len(self.g.neighbors(z1)) <= 2 && !self.g.has_edge(x1, z1) {
                        cands.push(self.identification(
                            tag,
                            "3-2-5 path, merge across z",
                            &[x, y, z, x2],
                            vec![(vec![x1, z1], vec![z])],
                            &[x, y, z],
                        ));
                    }
                }
                let mut rem = vec![x, y, z];
                rem.extend(&xs);
                cands.push(self.deletion(tag, "3-2-5 path, deletion", &rem, &[x, y, z]));
            }
        } else {
            // p == 4: x2, x3 are the common neighbors of x and z.
            let common: Vec<Vertex> = self
                .g
                .neighbors(x)
                .intersection(self.g.neighbors(z))
                .iter()
                .filter(|&t| t != y)
                .collect();
            let zs = others(z, &[y, common.first().copied().unwrap_or(y), common.get(1).copied().unwrap_or(y)]);
            if common.len() == 2 {
                let (x2, x3) = (common[0], common[1]);
                let sep_free = self.g.neighbors(x2).intersection(self.g.neighbors(x3)).to_vec() == {
                    let mut v = vec![x, z];
                    v.sort_unstable();
                    v
                };
                if sep_free && q == 4 && zs.len() == 1 {
                    cands.push(self.identification(
                        tag,
                        "4-2-4 path, merge across x",
                        &[x, y, z, zs[0]],
                        vec![(vec![x2, x3], vec![x])],
                        &[x, y, z],
                    ));
                }
                if sep_free && q == 5 && zs.len() == 2 {
                    cands.push(self.identification(
                        tag,
                        "4-2-5 path, merge twice",
                        &[x, y, z],
                        vec![(vec![x2, x3], vec![x]), (zs.clone(), vec![z])],
                        &[x, y, z],
                    ));
                }
                let mut rem = vec![x, y, z, x2, x3];
                rem.extend(&zs);
                cands.push(self.deletion(tag, "4-2-q path, deletion", &rem, &[x, y, z]));
            } else {
                cands.push(self.deletion(tag, "4-2-q path, deletion", &[x, y, z], &[x, y, z]));
            }
        }
        self.best(cands)
    }

    /// The rotation neighbor of `a` around `v` that is not `not`.
    fn rot_neighbor_except(&self, v: Vertex, a: Vertex, not: Vertex) -> Option<Vertex> {
        let r = self.rot(v);
        let i = r.iter().position(|&t| t == a)?;
        let k = r.len();
        [r[(i + 1) % k], r[(i + k - 1) % k]].into_iter().find(|&t| t != not)
    }

    fn edge434(&self, hits: &mut Vec<ConfigHit>) {
        for x1 in 0..self.g.n() {
            if self.deg[x1] != 3 {
                continue;
            }
            let nb = self.g.neighbors(x1).to_vec();
            for &x in &nb {
                let rest: Vec<Vertex> = nb.iter().copied().filter(|&t| t != x).collect();
                if rest.iter().any(|&t| self.deg[t] != 4) {
                    continue;
                }
                for (y1, z1) in [(rest[0], rest[1]), (rest[1], rest[0])] {
                    let Some(x2) = self.opp(x1, x, y1) else { continue };
                    if self.g.has_edge(z1, x2) {
                        hits.push(self.hit(ConfigTag::Edge434, x1, &[x, x1, y1, z1, x2], None));
                    }
                }
            }
        }
    }

    fn low_deg_path(&self, hits: &mut Vec<ConfigHit>) {
        for y in 0..self.g.n() {
            if self.deg[y] > 3 {
                continue;
            }
            let low: Vec<Vertex> = self.g.neighbors(y).iter().filter(|&t| self.deg[t] <= 3).collect();
            for (i, &a) in low.iter().enumerate() {
                for &b in &low[i + 1..] {
                    let step = self.best([self.path_step(a, y, b), self.path_step(b, y, a)].into_iter().flatten().collect());
                    hits.push(self.hit(ConfigTag::LowDegPath, y, &[a, y, b], step));
                }
            }
        }
    }

    fn path_step(&self, x: Vertex, y: Vertex, z: Vertex) -> Option<ReductionStep> {
        let tag = ConfigTag::LowDegPath;
        let g = self.g;
        let (dx, dy, dz) = (self.deg[x], self.deg[y], self.deg[z]);
        let common: Vec<Vertex> = g.neighbors(x).intersection(g.neighbors(z)).iter().filter(|&t| t != y).collect();
        let fallback = || Some(self.deletion(tag, "low-degree path, deletion", &[x, y, z], &[x, y, z]));
        if dy != 3 || dz != 3 || dx < 2 || common.is_empty() {
            return fallback();
        }
        let s = common[0];
        let y1 = g.neighbors(y).iter().find(|&t| t != x && t != z)?;
        if dx == 2 {
            return Some(self.deletion(tag, "2-3-3 path", &[x, y, z, s, y1], &[x, y, z]));
        }
        let x1 = g.neighbors(x).iter().find(|&t| t != s && t != y)?;
        let z1 = g.neighbors(z).iter().find(|&t| t != s && t != y)?;
        if x1 == z1 {
            return Some(self.deletion(tag, "3-3-3 path, shared end", &[x, y, z, s, x1], &[x, y, z]));
        }
        let shared = g.neighbors(x1).intersection(g.neighbors(z1));
        let mut cands = Vec::new();
        if shared.to_vec() == vec![y1] && !g.has_edge(x1, z1) {
            cands.push(self.identification(
                tag,
                "3-3-3 path, merge ends",
                &[x, y, z, s],
                vec![(vec![x1, z1], vec![y])],
                &[x, y, z],
            ));
        }
        cands.push(self.deletion(tag, "3-3-3 path, separated", &[s, x, y, z, x1, y1, z1], &[x, y, z]));
        self.best(cands)
    }

    fn three_vertex_rules(&self, hits: &mut Vec<ConfigHit>) {
        for x in 0..self.g.n() {
            if self.deg[x] != 3 {
                continue;
            }
            let nb = self.g.neighbors(x).to_vec();
            let with_r: Vec<Vertex> = nb.iter().copied().filter(|&t| self.r_nonempty(t, &[x])).collect();
            for (i, &y) in with_r.iter().enumerate() {
                for &z in &with_r[i + 1..] {
                    let mut w = vec![x, y, z];
                    w.extend(self.r_elements(y, &[x])[0].members());
                    w.extend(self.r_elements(z, &[x])[0].members());
                    hits.push(self.hit(ConfigTag::DoubleRAt3, x, &w, None));
                }
            }
            for &y in nb.iter().filter(|&&t| self.deg[t] <= 4) {
                for &z in with_r.iter().filter(|&&t| t != y) {
                    let mut w = vec![x, y, z];
                    w.extend(self.r_elements(z, &[x])[0].members());
                    hits.push(self.hit(ConfigTag::WeakPlusR, x, &w, None));
                }
            }
            let mut closed = nb.clone();
            closed.push(x);
            if nb.iter().all(|&t| self.deg[t] <= 4) {
                hits.push(self.hit(ConfigTag::AllWeak3, x, &closed, None));
            }
            let degs: BTreeSet<usize> = nb.iter().map(|&t| self.deg[t]).collect();
            if degs.contains(&3) && degs.contains(&4) && degs.contains(&5) {
                hits.push(self.hit(ConfigTag::Mixed345, x, &closed, None));
            }
        }
    }

    fn five_two_b_face(&self, hits: &mut Vec<ConfigHit>) {
        for x in 0..self.g.n() {
            if self.deg[x] != 3 {
                continue;
            }
            let nb = self.g.neighbors(x).to_vec();
            for &w in nb.iter().filter(|&&t| self.deg[t] == 5) {
                let rest: Vec<Vertex> = nb.iter().copied().filter(|&t| t != w).collect();
                if rest.iter().any(|&t| self.deg[t] > 4) {
                    continue;
                }
                for &z in &rest {
                    let Some(v) = self.opp(x, z, w) else { continue };
                    if self.deg[v] <= 4 || self.r_nonempty(v, &[w, z]) {
                        hits.push(self.hit(ConfigTag::FiveTwoBFace, x, &[x, w, rest[0], rest[1], v], None));
                    }
                }
            }
        }
    }

    fn five_two_b_ladder(&self, hits: &mut Vec<ConfigHit>) {
        for x in 0..self.g.n() {
            if self.deg[x] != 5 || self.classify(x) != VertexType::FiveTwoB {
                continue;
            }
            for start in 0..5 {
                for fwd in [true, false] {
                    let r = self.walk(x, start, fwd);
                    let (x1, y, x3, z, x2) = (r[0], r[1], r[2], r[3], r[4]);
                    if self.deg[y] != 3 || self.deg[z] != 3 || self.deg[x1] != 4 {
                        continue;
                    }
                    let (Some(z1), Some(z2), Some(w)) = (self.opp(x, z, x2), self.opp(x, x3, z), self.opp(x, x2, x1)) else {
                        continue;
                    };
                    if self.deg[z1] == 4 && self.deg[z2] == 4 && self.deg[w] == 3 {
                        hits.push(self.hit(ConfigTag::FiveTwoBLadder, x, &[x, x1, y, x3, z, x2, z1, z2, w], None));
                    }
                }
            }
        }
    }

    fn five_one_b_wheel(&self, hits: &mut Vec<ConfigHit>) {
        for x in 0..self.g.n() {
            if self.deg[x] != 5 || self.classify(x) != VertexType::FiveOneB {
                continue;
            }
            for start in 0..5 {
                for fwd in [true, false] {
                    let r = self.walk(x, start, fwd);
                    let (y4, y2, y5, y1, y3) = (r[0], r[1], r[2], r[3], r[4]);
                    if self.deg[y4] != 3 || self.deg[y1] != 4 || self.deg[y2] != 4 {
                        continue;
                    }
                    let faces = (self.opp(x, y1, y3), self.opp(x, y4, y2), self.opp(x, y1, y5), self.opp(x, y2, y5));
                    let (Some(y3p), Some(y4p), Some(z1), Some(z2)) = faces else { continue };
                    if [z1, z2, y3p].iter().all(|&t| self.deg[t] == 3) {
                        hits.push(self.hit(
                            ConfigTag::FiveOneBWheel,
                            x,
                            &[x, y1, y2, y3, y4, y5, y3p, y4p, z1, z2],
                            None,
                        ));
                    }
                }
            }
        }
    }

    fn six_two_a_twin(&self, hits: &mut Vec<ConfigHit>) {
        for x in 0..self.g.n() {
            let m = self.deg[x];
            if m < 5 {
                continue;
            }
            for a in 0..m {
                for fwd in [true, false] {
                    let r = self.walk(x, a, fwd);
                    let x1 = r[0];
                    if self.deg[x1] != 3 || !self.all_weak(x1, x) {
                        continue;
                    }
                    for k in 2..m - 1 {
                        let xk = r[k];
                        if self.deg[xk] != 3 || !self.all_weak(xk, x) {
                            continue;
                        }
                        let y1 = self.g.neighbors(x1).iter().find(|&t| t != x && self.g.has_edge(t, r[1]));
                        let y2 = self.g.neighbors(xk).iter().find(|&t| t != x && self.g.has_edge(t, r[k - 1]));
                        let (Some(y1), Some(y2)) = (y1, y2) else { continue };
                        let mut w = vec![x, x1, xk, y1, y2];
                        w.extend(self.g.neighbors(x1).iter());
                        w.extend(self.g.neighbors(xk).iter());
                        hits.push(self.hit(ConfigTag::SixTwoATwin, x, &w, None));
                    }
                }
            }
        }
    }

    fn cc_adjacent(&self, hits: &mut Vec<ConfigHit>) {
        for v in 0..self.g.n() {
            if self.deg[v] != 5 {
                continue;
            }
            let ty = self.classify(v);
            if ty != VertexType::FiveTwoC && ty != VertexType::FiveTwoB {
                continue;
            }
            for start in 0..5 {
                for fwd in [true, false] {
                    let r = self.walk(v, start, fwd);
                    let (v1, v2, v3, v4, v5) = (r[0], r[1], r[2], r[3], r[4]);
                    if self.deg[v1] != 3 || self.deg[v3] != 3 {
                        continue;
                    }
                    if ty == VertexType::FiveTwoC {
                        self.cc_pair(hits, v, [v1, v2, v3, v4, v5]);
                    } else {
                        self.cc_second(hits, v, [v1, v2, v3, v4, v5]);
                    }
                }
            }
        }
    }

    // `v` is 5-2-C; look at the neighbor `v4` across the face `v v4 x v5`.
    fn cc_pair(&self, hits: &mut Vec<ConfigHit>, v: Vertex, [v1, v2, v3, v4, v5]: [Vertex; 5]) {
        if self.deg[v5] != 4 || self.deg[v4] != 5 {
            return;
        }
        let Some(x) = self.opp(v, v4, v5) else { return };
        if self.deg[x] != 3 {
            return;
        }
        let t4 = self.classify(v4);
        if t4 != VertexType::FiveTwoB && t4 != VertexType::FiveOneA {
            return;
        }
        let r4 = self.rot(v4);
        let Some(ix) = r4.iter().position(|&t| t == x) else { return };
        for fwd in [true, false] {
            let w = self.walk(v4, ix, fwd);
            if w[1] != v {
                continue;
            }
            let (a, b, c) = (w[2], w[3], w[4]);
            let (Some(y), Some(z), Some(xp)) = (self.opp(v4, a, b), self.opp(v4, b, c), self.opp(v4, c, x)) else {
                continue;
            };
            let witness = [v, v1, v2, v3, v4, v5, x, a, b, c, y, z, xp];
            if t4 == VertexType::FiveTwoB && self.deg[b] == 3 && self.deg[xp] == 4 {
                hits.push(self.hit(ConfigTag::CCadjB, v, &witness, None));
            }
            if t4 == VertexType::FiveOneA && self.deg[y] == 3 && self.deg[z] == 3 && self.deg[xp] <= 4 {
                hits.push(self.hit(ConfigTag::CCadjA, v, &witness, None));
            }
        }
    }

    // `v` is 5-2-B with the all-weak side at `v3`; `v2` must be 5-2-C.
    fn cc_second(&self, hits: &mut Vec<ConfigHit>, v: Vertex, [v1, v2, v3, v4, v5]: [Vertex; 5]) {
        let faces = (self.opp(v, v1, v2), self.opp(v, v5, v1), self.opp(v, v2, v3), self.opp(v, v3, v4));
        let (Some(v1p), Some(v1pp), Some(v3p), Some(v3pp)) = faces else { return };
        if self.deg[v1pp] < 5 || self.deg[v3p] != 4 || self.deg[v3pp] != 4 {
            return;
        }
        if self.deg[v2] != 5 || self.classify(v2) != VertexType::FiveTwoC {
            return;
        }
        let r2 = self.rot(v2);
        let Some(iv) = r2.iter().position(|&t| t == v) else { return };
        for fwd in [true, false] {
            let w = self.walk(v2, iv, fwd);
            if w[1] == v1p && w[4] == v3p && self.deg[w[1]] == 3 && self.deg[w[3]] == 3 {
                hits.push(self.hit(
                    ConfigTag::CCadjB2,
                    v,
                    &[v, v1, v2, v3, v4, v5, v1p, v1pp, v3p, v3pp, w[2], w[3]],
                    None,
                ));
            }
        }
    }

    fn deletion(&self, tag: ConfigTag, recipe: &str, removed: &[Vertex], add: &[Vertex]) -> ReductionStep {
        let removed: VertexSet = removed.iter().copied().collect();
        let add: VertexSet = add.iter().copied().collect();
        let step = ReductionStep::deletion(StepKind::Config(tag), recipe, removed.clone(), add.clone());
        if step.is_structurally_sound(self.g) {
            step
        } else {
            soundify(self.g, StepKind::Config(tag), &format!("{recipe} (widened)"), removed, add)
        }
    }

    fn identification(
        &self,
        tag: ConfigTag,
        recipe: &str,
        removed: &[Vertex],
        groups: Vec<(Vec<Vertex>, Vec<Vertex>)>,
        add: &[Vertex],
    ) -> ReductionStep {
        let groups: Vec<(VertexSet, VertexSet)> = groups
            .into_iter()
            .map(|(g, d)| (g.into_iter().collect(), d.into_iter().collect()))
            .collect();
        let step = ReductionStep::with_identification(
            StepKind::Config(tag),
            recipe,
            removed.iter().copied().collect(),
            groups.clone(),
            add.iter().copied().collect(),
        );
        if step.is_structurally_sound(self.g) && self.pg_applicable(&step) {
            return step;
        }
        let mut removed: Vec<Vertex> = removed.to_vec();
        for (g, _) in &groups {
            removed.extend(g.iter());
        }
        self.deletion(tag, &format!("{recipe} (as deletion)"), &removed, add)
    }

    fn pg_applicable(&self, step: &ReductionStep) -> bool {
        crate::reduction::apply_step(self.pg, step).is_ok()
    }

    /// Prefers steps that keep the bound locally, then larger slack.
    fn best(&self, cands: Vec<ReductionStep>) -> Option<ReductionStep> {
        let n = self.g.n();
        cands.into_iter().enumerate().max_by_key(|(i, s)| {
            let child = s.child_order(n);
            let slack = if child == 0 { s.credit as isize - bound(n).unwrap_or(0) as isize } else {
                bound(child).unwrap_or(0) as isize + s.credit as isize - bound(n).unwrap_or(0) as isize
            };
            (slack, std::cmp::Reverse(*i))
        }).map(|(_, s)| s)
    }
}

pub fn classify_vertex(pg: &PlaneGraph, v: Vertex) -> VertexTypeLabel {
    VertexTypeLabel {
        vertex: v,
        label: Context::new(pg).classify(v),
    }
}

pub fn detect(pg: &PlaneGraph) -> Vec<ConfigHit> {
    Context::new(pg).detect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub connected: bool,
    pub quadrangulation: bool,
    pub min_degree_at_least_2: bool,
    pub bipartite: bool,
}

impl ShapeReport {
    pub fn all_hold(&self) -> bool {
        self.connected && self.quadrangulation && self.min_degree_at_least_2 && self.bipartite
    }
}

pub fn assert_minimal_shape(pg: &PlaneGraph) -> ShapeReport {
    let g = pg.graph();
    ShapeReport {
        connected: g.is_connected(),
        quadrangulation: pg.is_quadrangulation(),
        min_degree_at_least_2: g.n() > 0 && g.min_degree() >= 2,
        bipartite: g.is_bipartite(),
    }
}
