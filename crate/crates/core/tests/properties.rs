mod common;

use bipforest::generate::{random_quadrangulation, random_tree};
use bipforest::reduction::r_step;
use bipforest::solver::target_for;
use bipforest::{
    a_bruteforce, a_exact, apply_rules, audit, bound, build_forest, certify_reduction, emit_graph6, emit_planar_code,
    final_charges, force_vertex, initial_charges, parse_graph6, parse_planar_code, Graph, PlaneGraph, VertexSet,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn quad(seed: u64, n: usize) -> PlaneGraph {
    random_quadrangulation(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn arbitrary_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (1..n).flat_map(|j| (0..j).map(move |i| (i, j)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_is_the_exact_ceiling(n in 1usize..100_000) {
        let b = bound(n).unwrap();
        prop_assert!(7 * b >= 4 * n + 3);
        prop_assert!(7 * (b - 1) < 4 * n + 3);
        prop_assert_eq!(bound(n + 7).unwrap(), b + 4);
    }

    #[test]
    fn exact_matches_bruteforce(g in arbitrary_graph(11)) {
        let a = a_exact(&g).unwrap();
        let b = a_bruteforce(&g).unwrap();
        prop_assert_eq!(&a.vertices, &b.vertices);
        prop_assert!(g.induces_forest(&a.vertices));
    }

    #[test]
    fn graph6_round_trips(g in arbitrary_graph(70)) {
        let bytes = emit_graph6(&g);
        let back = parse_graph6(&bytes).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(emit_graph6(&back), bytes);
    }

    #[test]
    fn planar_code_round_trips(seed in any::<u64>(), n in 4usize..80) {
        let pg = quad(seed, n);
        let bytes = emit_planar_code(std::slice::from_ref(&pg), false);
        let back = parse_planar_code(&bytes).unwrap();
        prop_assert_eq!(back[0].rotations(), pg.rotations());
        prop_assert_eq!(emit_planar_code(&back, false), bytes);
    }

    #[test]
    fn generated_quadrangulations_satisfy_euler(seed in any::<u64>(), n in 4usize..60) {
        let pg = quad(seed, n);
        prop_assert_eq!(pg.n(), n);
        prop_assert!(pg.is_quadrangulation() && pg.graph().is_bipartite());
        prop_assert_eq!(pg.n() + pg.face_count(), pg.graph().edge_count() + 2);
    }

    #[test]
    fn charge_is_conserved(seed in any::<u64>(), n in 4usize..60) {
        let pg = quad(seed, n);
        let led = apply_rules(&pg, initial_charges(&pg));
        prop_assert_eq!(led.initial_total(), -32);
        prop_assert_eq!(final_charges(&led).total(), -32);
        prop_assert!(audit(&pg).conserved());
    }

    #[test]
    fn sound_target_reductions_certify_and_lift(seed in any::<u64>(), n in 4usize..=14) {
        let pg = quad(seed, n);
        for v in 0..pg.n() {
            for e in bipforest::compute_r(&pg, v, &VertexSet::new()).elements() {
                let step = r_step(&pg, v, &e);
                if !step.is_structurally_sound(pg.graph()) {
                    continue;
                }
                let rep = certify_reduction(&pg, &step).unwrap();
                prop_assert!(rep.ok, "{:?}", rep);
                prop_assert!(rep.lift_verified, "{:?}", rep);
                prop_assert_eq!(rep.credit, 1);
            }
        }
    }

    #[test]
    fn builder_meets_the_bound(seed in any::<u64>(), n in 4usize..40) {
        let pg = quad(seed, n);
        let rep = build_forest(&pg).unwrap();
        prop_assert!(pg.graph().induces_forest(&rep.certificate.vertices));
        prop_assert!(rep.meets_target || rep.budget_exceeded, "{:?}", rep.rule_chain);
        prop_assert_eq!(rep.target, target_for(n));
    }

    #[test]
    fn trees_are_their_own_forest(seed in any::<u64>(), n in 1usize..60) {
        let t = random_tree(n, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(build_forest(&t).unwrap().certificate.size, n);
    }

    #[test]
    fn forcing_a_low_degree_vertex_keeps_size(seed in any::<u64>(), n in 4usize..16, pick in any::<usize>()) {
        let pg = quad(seed, n);
        let g = pg.graph();
        let best = a_exact(g).unwrap().vertices;
        let lows: Vec<_> = (0..n).filter(|&v| g.degree(v) <= 3).collect();
        prop_assume!(!lows.is_empty());
        let v = lows[pick % lows.len()];
        let f = force_vertex(g, &best, v);
        prop_assert!(f.contains(v) && f.len() == best.len() && g.induces_forest(&f));
    }
}
