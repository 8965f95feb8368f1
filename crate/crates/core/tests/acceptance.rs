//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use bipforest::generate::cube;
use bipforest::inequality::check_ineq2;
use bipforest::solver::target_for;
use bipforest::{
    a_bruteforce, a_exact, audit, bound, build_forest, certify_reduction, check_ineq1, detect, emit_graph6,
    emit_planar_code, parse_graph6, parse_planar_code, ConfigTag, CorpusEntry, PlaneGraph,
};
use common::*;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn plane(e: &CorpusEntry) -> &PlaneGraph {
    e.plane.as_ref().expect("generated entries carry embeddings")
}

fn tightness() -> Outcome {
    let t = Instant::now();
    let g = cube();
    let cert = a_exact(g.graph()).expect("solver");
    let elapsed = t.elapsed();
    let ok = cert.size == 5 && bound(8) == Ok(5) && g.graph().induces_forest(&cert.vertices) && elapsed < Duration::from_secs(1);
    outcome(ok, format!("a(Q3)={} bound(8)={:?} in {elapsed:.2?} (limit 1s)", cert.size, bound(8)))
}

fn desk_bound(corpus: &[CorpusEntry]) -> Outcome {
    let t = Instant::now();
    let failures: Vec<String> = corpus
        .par_iter()
        .filter(|e| e.n() <= DESK_MAX_N)
        .filter_map(|e| match a_exact(&e.graph) {
            Ok(c) if c.size >= target_for(e.n()) && c.is_valid(&e.graph) => None,
            Ok(c) => Some(format!("{}: a={} < {}", e.id, c.size, target_for(e.n()))),
            Err(err) => Some(format!("{}: {err}", e.id)),
        })
        .collect();
    let elapsed = t.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(300);
    outcome(ok, format!("{} entries, {} failures {:?} in {elapsed:.2?} (limit 300s)", corpus.len(), failures.len(), first(&failures)))
}

fn oracle_equivalence() -> Outcome {
    let mut graphs: Vec<(String, bipforest::Graph)> = family_fixtures(DESK_MAX_N).into_iter().map(|e| (e.id, e.graph)).collect();
    let fixtures = graphs.len();
    graphs.extend((0..200).map(|i| (format!("random-bipartite-{i}"), random_bipartite_planar(9000 + i, 12))));
    let mismatches: Vec<String> = graphs
        .par_iter()
        .filter_map(|(id, g)| {
            let (a, b) = (a_exact(g).ok()?, a_bruteforce(g).ok()?);
            (a.size != b.size).then(|| format!("{id}: exact {} brute {}", a.size, b.size))
        })
        .collect();
    let errors = graphs.iter().filter(|(_, g)| a_exact(g).is_err() || a_bruteforce(g).is_err()).count();
    outcome(
        mismatches.is_empty() && errors == 0,
        format!("{fixtures} fixtures + 200 random, {} mismatches, {errors} errors {:?}", mismatches.len(), first(&mismatches)),
    )
}

fn inequalities() -> Outcome {
    let t = Instant::now();
    let mut verdicts = vec![check_ineq1(200)];
    for p in 1..=8 {
        verdicts.push(check_ineq2(p, 60).expect("valid part"));
    }
    let elapsed = t.elapsed();
    let bad: Vec<&str> = verdicts.iter().filter(|v| !v.fully_accounted()).map(|v| v.check.as_str()).collect();
    let realized: usize = verdicts.iter().flat_map(|v| &v.exceptions).filter(|e| e.realized_by.is_some()).count();
    let vacuous: usize = verdicts.iter().flat_map(|v| &v.exceptions).filter(|e| e.vacuous).count();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(60),
        format!("9 checks, failing {bad:?}, exceptions realized {realized} vacuous {vacuous}, {elapsed:.2?} (limit 60s)"),
    )
}

fn conservation(corpus: &[CorpusEntry]) -> Outcome {
    let bad: Vec<String> = corpus
        .par_iter()
        .filter(|e| e.graph.is_connected())
        .filter_map(|e| {
            let rep = audit(plane(e));
            (rep.total_initial_quarters != -32 || rep.total_final_quarters != -32)
                .then(|| format!("{}: {} -> {}", e.id, rep.total_initial_quarters, rep.total_final_quarters))
        })
        .collect();
    outcome(bad.is_empty(), format!("initial and final total -8 (=-32 quarters) exactly; {} violations {:?}", bad.len(), first(&bad)))
}

/// Audits the quadrangulations with minimum degree at least 2 once for both
/// discharging criteria.
fn shaped_audits(corpus: &[CorpusEntry]) -> Vec<(String, bipforest::AuditReport)> {
    corpus
        .par_iter()
        .map(|e| (e.id.clone(), audit(plane(e))))
        .filter(|(_, rep)| rep.in_hypothesis)
        .collect()
}

fn charge_case_analysis(audits: &[(String, bipforest::AuditReport)]) -> Outcome {
    let bad: Vec<String> = audits
        .iter()
        .filter(|(_, r)| !r.uncovered_negative.is_empty())
        .map(|(id, r)| format!("{id}: {:?}", r.uncovered_negative))
        .collect();
    outcome(bad.is_empty(), format!("{} quadrangulations, {} with an uncovered negative 5- or 6-vertex {:?}", audits.len(), bad.len(), first(&bad)))
}

fn detector_completeness(audits: &[(String, bipforest::AuditReport)]) -> Outcome {
    let bad: Vec<&str> = audits.iter().filter(|(_, r)| !r.hits_present).map(|(id, _)| id.as_str()).collect();
    outcome(bad.is_empty(), format!("{} quadrangulations, without a hit: {bad:?}", audits.len()))
}

fn reduction_certification(corpus: &[CorpusEntry]) -> Outcome {
    let kinds = [ConfigTag::TwoDisjointR, ConfigTag::Deg2Profile, ConfigTag::LowDegPath];
    let results: Vec<Result<(), String>> = corpus
        .par_iter()
        .filter(|e| e.n() <= 14)
        .flat_map_iter(|e| {
            let pg = plane(e);
            detect(pg)
                .into_iter()
                .filter(|h| kinds.contains(&h.tag))
                .map(|h| match &h.suggested_step {
                    None => Err(format!("{} {}: no step", e.id, h.tag)),
                    Some(step) => match certify_reduction(pg, step) {
                        Ok(r) if r.ok && r.a_parent >= r.a_child + r.credit => Ok(()),
                        Ok(r) => Err(format!("{} {}: {} < {} + {}", e.id, h.tag, r.a_parent, r.a_child, r.credit)),
                        Err(err) => Err(format!("{} {}: {err}", e.id, h.tag)),
                    },
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let bad: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
    outcome(bad.is_empty(), format!("{} certifications, {} failures {:?}", results.len(), bad.len(), first(&bad)))
}

fn builder(corpus: &[CorpusEntry]) -> Outcome {
    let small: Vec<String> = corpus
        .par_iter()
        .filter_map(|e| match build_forest(plane(e)) {
            Ok(r) if r.meets_target && r.certificate.is_valid(&e.graph) => None,
            Ok(r) => Some(format!("{}: {} < {}", e.id, r.certificate.size, r.target)),
            Err(err) => Some(format!("{}: {err}", e.id)),
        })
        .collect();
    let large = random_quads(200, CORPUS_SEED + 1, 21, 60);
    let reports: Vec<_> = large.par_iter().map(|e| (e.id.clone(), build_forest(plane(e)))).collect();
    let good = reports
        .iter()
        .filter(|(_, r)| r.as_ref().is_ok_and(|r| r.meets_target && !r.budget_exceeded))
        .count();
    let shortfalls: Vec<String> = reports
        .iter()
        .filter_map(|(id, r)| match r {
            Ok(r) if r.meets_target && !r.budget_exceeded => None,
            Ok(r) => Some(format!("{id}: {}/{} budget_exceeded={}", r.certificate.size, r.target, r.budget_exceeded)),
            Err(err) => Some(format!("{id}: {err}")),
        })
        .collect();
    let fallbacks = reports.iter().filter(|(_, r)| r.as_ref().is_ok_and(|r| r.fallback_used)).count();
    let ok = small.is_empty() && good * 100 >= 95 * large.len();
    outcome(
        ok,
        format!(
            "n<=20: {} shortfalls {:?}; 20<n<=60: {good}/{} met (need 95%), fallback used {fallbacks}, shortfalls {shortfalls:?}",
            small.len(),
            first(&small),
            large.len()
        ),
    )
}

fn format_fidelity() -> Outcome {
    let mut set: Vec<PlaneGraph> = random_quads(700, 77, 4, 60).into_iter().filter_map(|e| e.plane).collect();
    set.extend(family_fixtures(64).into_iter().filter_map(|e| e.plane).take(300));
    let trees = bipforest::generate_corpus(bipforest::Family::Trees, 1000 - set.len(), &bipforest::GenOptions { seed: 78, min_n: 1, max_n: 70 });
    set.extend(trees.into_iter().filter_map(|e| e.plane));
    let mut bad = Vec::new();
    for (i, pg) in set.iter().enumerate() {
        let bytes = emit_graph6(pg.graph());
        match parse_graph6(&bytes) {
            Ok(g) if &g == pg.graph() && emit_graph6(&g) == bytes => {}
            _ => bad.push(format!("graph6 #{i}")),
        }
    }
    let stream = emit_planar_code(&set, true);
    match parse_planar_code(&stream) {
        Ok(back) => {
            if emit_planar_code(&back, true) != stream {
                bad.push("planar code stream differs".into());
            }
            if back.iter().zip(&set).any(|(a, b)| a.rotations() != b.rotations()) || back.len() != set.len() {
                bad.push("planar code rotations differ".into());
            }
        }
        Err(err) => bad.push(format!("planar code: {err}")),
    }
    outcome(set.len() == 1000 && bad.is_empty(), format!("{} entries, failures {bad:?}", set.len()))
}

fn first(v: &[String]) -> Option<&String> {
    v.first()
}

fn main() {
    let corpus = desk_corpus();
    let audits = shaped_audits(&corpus);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("tightness on the cube", Box::new(tightness)),
        ("bound at desk scale", Box::new(|| desk_bound(&corpus))),
        ("exact solver matches brute force", Box::new(oracle_equivalence)),
        ("arithmetic inequalities", Box::new(inequalities)),
        ("charge conservation", Box::new(|| conservation(&corpus))),
        ("discharging instance check", Box::new(|| charge_case_analysis(&audits))),
        ("detector completeness", Box::new(|| detector_completeness(&audits))),
        ("reduction certification", Box::new(|| reduction_certification(&corpus))),
        ("constructive builder", Box::new(|| builder(&corpus))),
        ("format fidelity", Box::new(format_fidelity)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {} ({name}): {} [{:.2?}]", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail, t.elapsed());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
