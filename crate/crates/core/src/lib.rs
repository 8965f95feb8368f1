//! Induced forests in bipartite plane graphs: exact solvers, reduction
//! steps with verified lifts, a configuration detector, a discharging
//! auditor and exhaustive checks of the underlying arithmetic.

pub mod builder;
pub mod catalog;
pub mod discharging;
pub mod embedding;
pub mod formats;
pub mod generate;
pub mod graph;
pub mod inequality;
pub mod reduction;
pub mod solver;

pub use embedding::{EmbeddingError, FaceWalk, PlaneGraph};
pub use graph::{Graph, GraphError, IdMap, Vertex, VertexSet};
pub use inequality::{bound, check_ineq1, check_ineq2, residue_table, Verdict};
pub use solver::{a_bruteforce, a_exact, a_with_forced_vertex, bound_holds, ForestCertificate, Solver, SolverError};
pub use builder::{build_forest, greedy_forest, BuildReport, BuildRule, Builder};
pub use catalog::{assert_minimal_shape, classify_vertex, detect, ConfigHit, ConfigTag, ShapeReport, VertexType};
pub use discharging::{apply_rules, audit, final_charges, initial_charges, AuditReport, ChargeLedger, FinalCharges, Rule, Transfer};
pub use formats::{emit_graph6, emit_planar_code, parse_graph6, parse_graph6_file, parse_planar_code, FormatError};
pub use generate::{generate_corpus, CorpusEntry, Family, GenOptions, Source};
pub use reduction::{
    certify_reduction, compute_r, force_vertex, lift_forest, star_reduce, CertificationReport, RElement, RSet, ReductionError,
    ReductionStep, StepKind,
};
