//! Metric comparison conditions encoded by finite graphs.
//!
//! A finite graph `Γ` encodes a condition on a metric space: every labeling of
//! points by the vertices of `Γ` must admit a configuration in Hilbert space
//! whose edge distances contract and whose non-edge distances expand. This
//! crate decides, for any finite graph, whether that condition is trivial
//! (holds in every metric space) or nontrivial, and makes each verdict
//! concrete:
//!
//! * trivial graphs come with a five-integer decomposition (a path with a
//!   clique attached at each end) and an explicit real-line model builder;
//! * nontrivial graphs come with a vertex-fusion certificate reducing them to
//!   the four-cycle `C4` or the tripod `T3`, plus a violating labeled point
//!   set on which the comparison provably fails.
//!
//! A numerical feasibility checker (interval-constrained squared distances,
//! positive-semidefinite Gram transform, Dykstra alternating projections)
//! evaluates the comparison for arbitrary labeled point sets.

pub mod classify;
pub mod feasibility;
pub mod fusion;
pub mod graph;
pub mod metric;
pub mod model_line;
pub mod witness;

pub use classify::{
    check_proposition, check_star_inequality, classify, classify_connected, find_obstruction,
    five_array_from_sequence, graph_from_five_array, obstruction_certificate, Classification,
    ComponentClassification, FiveArray, Obstruction, ObstructionKind, PropositionCheck,
    ReductionTarget, StarCheck,
};
pub use feasibility::{
    check_comparison, embed_gram, negative_type_check, project_psd, verify_model,
    FeasibilityOutcome, FeasibilityVerdict, GramMatrix, SolverConfig,
};
pub use fusion::{
    absorb, fuse, fusion_reachable, induced_certificate, lift_labeling, verify_certificate,
    FusionCertificate, FusionStep, MixedChoice, SearchOutcome, DEFAULT_STATE_BUDGET,
};
pub use graph::{
    canonical_form, enumerate_connected_graphs, find_isomorphism, isomorphic, multipath_graph,
    recognize_multipath, sequence_of, Graph, GraphError, LevelFunction, MultipathOutcome,
    MultipathSequence, PathMetric,
};
pub use metric::{
    cycle_metric, metric_repair, random_instances, star_metric, validate_metric,
    ComparisonInstance, FiniteMetricSpace, InstanceMode, MetricViolation,
};
pub use model_line::{
    build_line_model, choose_special_vertex, line_model, weighted_distances, WeightedDistances,
};
pub use witness::{canonical_violation, violating_instance};
