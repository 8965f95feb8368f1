mod common;

use bipforest::generate::{cube, cycle};
use bipforest::{assert_minimal_shape, classify_vertex, detect, ConfigTag, PlaneGraph, VertexSet, VertexType};

fn quads() -> Vec<PlaneGraph> {
    common::random_quads(300, 11, 8, 40).into_iter().filter_map(|e| e.plane).collect()
}

#[test]
fn cube_has_low_degree_paths() {
    let hits = detect(&cube());
    assert!(hits.iter().any(|h| h.tag == ConfigTag::LowDegPath));
    for h in &hits {
        assert!(h.witness.iter().all(|v| v < 8));
    }
}

#[test]
fn four_cycle_has_degree_two_profile_everywhere() {
    let hits = detect(&cycle(4));
    let centers: VertexSet = hits.iter().filter(|h| h.tag == ConfigTag::Deg2Profile).map(|h| h.center).collect();
    assert_eq!(centers.len(), 4);
}

#[test]
fn every_witness_holds_a_low_degree_vertex() {
    // No pattern can fire on a region whose vertices all have degree 4 or more.
    for pg in quads() {
        for h in detect(&pg) {
            assert!(h.witness.iter().any(|v| pg.degree(v) <= 3), "{:?}", h.tag);
        }
    }
}

#[test]
fn classifier_matches_neighbor_degree_patterns() {
    let (mut five_zero, mut six_three) = (0, 0);
    for pg in quads() {
        for v in 0..pg.n() {
            let label = classify_vertex(&pg, v).label;
            let degs: Vec<usize> = pg.rotation(v).iter().map(|&u| pg.degree(u)).collect();
            match pg.degree(v) {
                5 if degs.iter().all(|&d| d >= 4) => {
                    assert_eq!(label, VertexType::FiveZero);
                    five_zero += 1;
                }
                6 if (0..2).any(|s| (0..6).all(|i| (degs[i] == 3) == (i % 2 == s))) => {
                    assert_eq!(label, VertexType::SixThree);
                    six_three += 1;
                }
                4 => assert_eq!(label, VertexType::Other),
                _ => {}
            }
        }
    }
    assert!(five_zero > 0 && six_three > 0, "fixtures not found: {five_zero} {six_three}");
}

#[test]
fn labels_serialize_as_type_names() {
    assert_eq!(serde_json::to_string(&VertexType::FiveTwoA).unwrap(), "\"5-2-A\"");
    assert_eq!(VertexType::SixZero.to_string(), "6-0");
}

#[test]
fn minimal_shape_reports() {
    assert!(assert_minimal_shape(&cube()).all_hold());
    let c6 = assert_minimal_shape(&cycle(6));
    assert!(!c6.quadrangulation && c6.min_degree_at_least_2);
    let (minus, _) = cube().delete_vertices(&std::iter::once(0).collect()).unwrap();
    let r = assert_minimal_shape(&minus);
    assert!(r.min_degree_at_least_2 && !r.quadrangulation);
}

#[test]
fn detection_is_deterministic_and_sorted() {
    for pg in quads().into_iter().take(50) {
        let a = detect(&pg);
        assert_eq!(a, detect(&pg));
        let keys: Vec<_> = a.iter().map(|h| (h.tag, h.witness.to_vec())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }
}

#[test]
fn suggested_steps_are_valid_on_their_graph() {
    for pg in quads().into_iter().take(80) {
        for h in detect(&pg) {
            if let Some(s) = &h.suggested_step {
                assert!(s.validate(pg.graph()).is_ok(), "{} {}", h.tag, s.recipe);
            }
        }
    }
}
