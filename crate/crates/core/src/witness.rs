//! Concrete violating instances for nontrivial graphs: the canonical
//! four-cycle and tripod violations, lifted back through a fusion certificate
//! so that fused vertices share one point.

use thiserror::Error;

use crate::classify::{Classification, ReductionTarget};
use crate::fusion::{lift_labeling, FusionError};
use crate::graph::{find_isomorphism, Graph, GraphError};
use crate::metric::{cycle_metric, star_metric, ComparisonInstance, MetricError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("graph is trivial; no violating instance exists")]
    TrivialGraph,
    #[error("certificate source does not match the graph")]
    SourceMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The canonical violating instance of a reduction target: the four-cycle
/// over its own path metric with identity labels, or the tripod over the
/// unit star metric with the center at the hub. Unit edge lengths keep the
/// infeasibility gap far above solver tolerance.
pub fn canonical_violation(target: ReductionTarget) -> ComparisonInstance {
    let (graph, space) = match target {
        ReductionTarget::C4 => (Graph::cycle(4), cycle_metric(4).expect("4 >= 3")),
        ReductionTarget::T3 => (Graph::tripod(), star_metric(3, 1.0).expect("3 legs")),
    };
    let labeling = (0..graph.vertex_count()).collect();
    ComparisonInstance::new(graph, space, labeling).expect("canonical instances are valid")
}

/// Lifts the canonical violation of the classification's target back through
/// its certificate, producing a labeling of `g` into the same metric space on
/// which the comparison fails.
pub fn violating_instance(
    g: &Graph,
    cls: &Classification,
) -> Result<ComparisonInstance, WitnessError> {
    let Classification::Nontrivial { target, cert } = cls else {
        return Err(WitnessError::TrivialGraph);
    };
    if cert.source != *g {
        return Err(WitnessError::SourceMismatch);
    }
    let canonical = canonical_violation(*target);
    let onto_canonical = find_isomorphism(&cert.target, &canonical.graph)?
        .ok_or(FusionError::TargetMismatch)?;
    let target_labels: Vec<usize> = (0..cert.target.vertex_count())
        .map(|v| canonical.labeling[onto_canonical[v]])
        .collect();
    let lifted = lift_labeling(cert, &target_labels)?;
    Ok(ComparisonInstance::new(g.clone(), canonical.space, lifted)?)
}
