//! Charge bookkeeping on plane graphs in quarter units: vertices start at
//! `4(deg - 4)`, faces at `4(len - 4)`, and vertices of degree at least 5
//! pass charge to nearby low-degree vertices.

use serde::{Deserialize, Serialize};

use crate::catalog::{assert_minimal_shape, ConfigHit, Context, ShapeReport, VertexType};
use crate::embedding::{FaceWalk, PlaneGraph};
use crate::graph::{Vertex, VertexSet};
use crate::reduction::RElement;

/// Quarter units per unit of charge.
pub const QUARTER: i64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// To the target set of the sender.
    Targets,
    /// To a 3-neighbor.
    ThreeNeighbor,
    /// Across a 4-face to a high-degree neighbor.
    Face,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub from: Vertex,
    pub to: Vertex,
    /// Quarter units.
    pub amount: i64,
    pub rule: Rule,
    /// The 3-vertex on the face for face transfers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeLedger {
    pub vertex_charge: Vec<i64>,
    pub face_charge: Vec<i64>,
    pub transfers: Vec<Transfer>,
    pub components: usize,
}

impl ChargeLedger {
    pub fn initial_total(&self) -> i64 {
        self.vertex_charge.iter().sum::<i64>() + self.face_charge.iter().sum::<i64>()
    }

    /// `-8` per component, in quarter units.
    pub fn expected_total(&self) -> i64 {
        -8 * QUARTER * self.components as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalCharges {
    pub vertex: Vec<i64>,
    pub face: Vec<i64>,
}

impl FinalCharges {
    pub fn total(&self) -> i64 {
        self.vertex.iter().sum::<i64>() + self.face.iter().sum::<i64>()
    }
}

/// Faces as traced, plus an empty boundary for each isolated vertex so that
/// every component contributes exactly `-8`.
fn charged_faces(pg: &PlaneGraph) -> Vec<i64> {
    let isolated = (0..pg.n()).filter(|&v| pg.degree(v) == 0).count();
    let traced = pg.trace_faces();
    traced
        .iter()
        .map(FaceWalk::len)
        .chain(std::iter::repeat(0).take(isolated))
        .map(|len| QUARTER * (len as i64 - 4))
        .collect()
}

pub fn initial_charges(pg: &PlaneGraph) -> ChargeLedger {
    ChargeLedger {
        vertex_charge: (0..pg.n()).map(|v| QUARTER * (pg.degree(v) as i64 - 4)).collect(),
        face_charge: charged_faces(pg),
        transfers: Vec::new(),
        components: pg.graph().components().len(),
    }
}

/// Appends the transfers of every sender, in vertex order.
pub fn apply_rules(pg: &PlaneGraph, ledger: ChargeLedger) -> ChargeLedger {
    let ctx = Context::new(pg);
    apply_rules_in(&ctx, ledger, 0..pg.n())
}

pub(crate) fn apply_rules_in(ctx: &Context, mut ledger: ChargeLedger, order: impl IntoIterator<Item = Vertex>) -> ChargeLedger {
    for v in order {
        ledger.transfers.extend(sender_transfers(ctx, v));
    }
    ledger
}

fn sender_transfers(ctx: &Context, v: Vertex) -> Vec<Transfer> {
    let d = ctx.deg(v) as i64;
    if d < 5 {
        return vec![];
    }
    let excess = QUARTER * (d - 4);
    let t = |to, amount, rule, via| Transfer { from: v, to, amount, rule, via };
    let elems = ctx.r_empty_set(v).elements();
    if !elems.is_empty() {
        let common: Vec<Vertex> = elems[0]
            .members()
            .into_iter()
            .filter(|&c| elems.iter().all(|e| e.contains(c)))
            .collect();
        return match (elems.len(), elems[0]) {
            (1, RElement::Single(r)) => vec![t(r, excess, Rule::Targets, None)],
            (1, RElement::Pair { r1, r2, .. }) => vec![
                t(r1, excess / 2, Rule::Targets, None),
                t(r2, excess / 2, Rule::Targets, None),
            ],
            _ if common.len() == 1 => vec![t(common[0], excess, Rule::Targets, None)],
            // Pairwise disjoint targets: the first one takes it.
            (_, RElement::Single(r)) => vec![t(r, excess, Rule::Targets, None)],
            (_, RElement::Pair { r1, r2, .. }) => vec![
                t(r1, excess / 2, Rule::Targets, None),
                t(r2, excess / 2, Rule::Targets, None),
            ],
        };
    }
    let g = ctx.g;
    let mut out = Vec::new();
    for u in g.neighbors(v).iter().filter(|&u| ctx.deg(u) == 3) {
        let amount = if ctx.all_weak(u, v) { 4 } else { 2 };
        out.push(t(u, amount, Rule::ThreeNeighbor, None));
    }
    if ctx.classify(v) != VertexType::FiveTwoC {
        for (r1, w, r2) in ctx.pg.cofacial_quads(v) {
            if ctx.deg(w) != 3 {
                continue;
            }
            for (x, y) in [(r1, r2), (r2, r1)] {
                if ctx.deg(x) >= 5 && ctx.deg(y) == 4 && ctx.classify(x) != VertexType::FiveTwoC {
                    out.push(t(x, 1, Rule::Face, Some(w)));
                }
            }
        }
    }
    out
}

pub fn final_charges(ledger: &ChargeLedger) -> FinalCharges {
    let mut vertex = ledger.vertex_charge.clone();
    for tr in &ledger.transfers {
        vertex[tr.from] -= tr.amount;
        vertex[tr.to] += tr.amount;
    }
    FinalCharges {
        vertex,
        face: ledger.face_charge.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub shape: ShapeReport,
    /// Whether the claims below are meaningful for this input.
    pub in_hypothesis: bool,
    pub components: usize,
    pub total_initial_quarters: i64,
    pub total_final_quarters: i64,
    pub negative_vertices: Vec<Vertex>,
    pub hits_present: bool,
    pub hit_count: usize,
    /// Degree 5 or 6 vertices with negative final charge and no
    /// configuration meeting their radius-2 ball.
    pub uncovered_negative: Vec<Vertex>,
    pub transfers: usize,
}

impl AuditReport {
    pub fn conserved(&self) -> bool {
        self.total_initial_quarters == self.total_final_quarters
            && self.total_initial_quarters == -8 * QUARTER * self.components as i64
    }
}

pub fn audit(pg: &PlaneGraph) -> AuditReport {
    let ctx = Context::new(pg);
    let hits = ctx.detect();
    audit_with_hits(&ctx, &hits)
}

pub fn audit_with_hits(ctx: &Context, hits: &[ConfigHit]) -> AuditReport {
    let pg = ctx.pg;
    let shape = assert_minimal_shape(pg);
    let ledger = apply_rules_in(ctx, initial_charges(pg), 0..pg.n());
    let fin = final_charges(&ledger);
    let negative_vertices: Vec<Vertex> = (0..pg.n()).filter(|&v| fin.vertex[v] < 0).collect();
    let uncovered_negative = negative_vertices
        .iter()
        .copied()
        .filter(|&v| matches!(ctx.deg(v), 5 | 6))
        .filter(|&v| {
            let ball: VertexSet = ctx.g.ball(v, 2);
            !hits.iter().any(|h| h.witness.intersection_len(&ball) > 0)
        })
        .collect();
    AuditReport {
        shape,
        in_hypothesis: shape.all_hold(),
        components: ledger.components,
        total_initial_quarters: ledger.initial_total(),
        total_final_quarters: fin.total(),
        negative_vertices,
        hits_present: !hits.is_empty(),
        hit_count: hits.len(),
        uncovered_negative,
        transfers: ledger.transfers.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cube, cycle};

    #[test]
    fn cube_charges() {
        let led = initial_charges(&cube());
        assert!(led.vertex_charge.iter().all(|&c| c == -4));
        assert_eq!(led.face_charge, vec![0; 6]);
        assert_eq!(led.initial_total(), -32);
        let led = apply_rules(&cube(), led);
        assert!(led.transfers.is_empty());
        assert!(final_charges(&led).vertex.iter().all(|&c| c == -4));
    }

    #[test]
    fn cycle_charges() {
        let led = initial_charges(&cycle(4));
        assert_eq!(led.vertex_charge, vec![-8; 4]);
        assert_eq!(led.face_charge, vec![0, 0]);
    }

    #[test]
    fn single_vertex_counts_as_one_component() {
        let pg = PlaneGraph::from_rotation(vec![vec![]]).unwrap();
        assert_eq!(initial_charges(&pg).initial_total(), -32);
    }

    #[test]
    fn sender_order_does_not_matter() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for i in 0..20 {
            let pg = crate::generate::random_quadrangulation(12 + i, &mut rng);
            let ctx = Context::new(&pg);
            let base = final_charges(&apply_rules_in(&ctx, initial_charges(&pg), 0..pg.n()));
            let mut order: Vec<Vertex> = (0..pg.n()).collect();
            order.shuffle(&mut rng);
            let shuffled = final_charges(&apply_rules_in(&ctx, initial_charges(&pg), order));
            assert_eq!(base, shuffled);
        }
    }

    #[test]
    fn audit_cube() {
        let rep = audit(&cube());
        assert!(rep.in_hypothesis && rep.conserved());
        assert_eq!(rep.negative_vertices.len(), 8);
        assert!(rep.hits_present);
    }
}
