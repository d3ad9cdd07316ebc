//! The classification dichotomy: a connected graph's comparison is either
//! trivial (and the graph is a multipath passing three structure conditions,
//! described by a five-array) or nontrivial (and the graph reduces by vertex
//! fusion to the four-cycle or the tripod, with a replayable certificate).

mod five_array;
mod obstruction;

pub use five_array::{five_array_from_sequence, graph_from_five_array, FiveArray};
pub use obstruction::{find_obstruction, obstruction_certificate, Obstruction, ObstructionKind};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{
    fusion_reachable, FusionCertificate, FusionError, SearchOutcome, DEFAULT_STATE_BUDGET,
};
use crate::graph::{
    isomorphic, recognize_multipath, sequence_of, Graph, GraphError, LevelFunction,
    MultipathOutcome, MultipathSequence,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error("sequence violates structure condition {0:?}")]
    PropositionViolated(PropositionCase),
    #[error("invalid five-array: {0}")]
    InvalidFiveArray(String),
    #[error("obstruction does not match the graph: {0}")]
    ObstructionMismatch(String),
    #[error("no reduction certificate found within the search budget")]
    SearchBudget,
}

/// The two universal reduction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionTarget {
    C4,
    T3,
}

impl ReductionTarget {
    pub fn graph(&self) -> Graph {
        match self {
            ReductionTarget::C4 => Graph::cycle(4),
            ReductionTarget::T3 => Graph::tripod(),
        }
    }

    pub fn of_graph(g: &Graph) -> Result<Option<ReductionTarget>, GraphError> {
        for target in [ReductionTarget::C4, ReductionTarget::T3] {
            if isomorphic(g, &target.graph())? {
                return Ok(Some(target));
            }
        }
        Ok(None)
    }
}

/// Which structure condition a multipath sequence violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropositionCase {
    /// Five or more levels: some interior level holds more than one vertex.
    Interior,
    /// Exactly four levels: both middle levels hold more than one vertex.
    FourLevel,
    /// Exactly three levels: every level holds more than one vertex.
    ThreeLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropositionCheck {
    Pass,
    Violation(PropositionCase),
}

impl PropositionCheck {
    pub fn is_pass(&self) -> bool {
        matches!(self, PropositionCheck::Pass)
    }
}

/// Structure conditions a trivial multipath must satisfy: with levels
/// `(k_0, ..., k_m)`, graphs on at most two levels always pass; `m = 2` needs
/// some level of size one; `m = 3` needs a middle level of size one; `m >= 4`
/// needs every interior level (`k_2` through `k_{m-2}`) of size one.
pub fn check_proposition(seq: &MultipathSequence) -> PropositionCheck {
    let k = seq.counts();
    let m = seq.top_level();
    match m {
        0 | 1 => PropositionCheck::Pass,
        2 => {
            if k.iter().any(|&c| c == 1) {
                PropositionCheck::Pass
            } else {
                PropositionCheck::Violation(PropositionCase::ThreeLevel)
            }
        }
        3 => {
            if k[1] == 1 || k[2] == 1 {
                PropositionCheck::Pass
            } else {
                PropositionCheck::Violation(PropositionCase::FourLevel)
            }
        }
        _ => {
            if (2..=(m - 2)).all(|i| k[i] == 1) {
                PropositionCheck::Pass
            } else {
                PropositionCheck::Violation(PropositionCase::Interior)
            }
        }
    }
}

/// Result of evaluating the geodesic additivity condition on a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarCheck {
    Holds,
    /// The three pairwise distances, largest first.
    Fails { distances: [usize; 3] },
}

/// Checks, for one vertex triple, that whenever all three pairwise path
/// distances are at least two, the largest equals the sum of the other two.
/// The triple is sorted internally, so argument order does not matter.
pub fn check_star_inequality(
    g: &Graph,
    u: usize,
    v: usize,
    w: usize,
) -> Result<StarCheck, ClassifyError> {
    let pm = g.path_metric();
    if pm.diameter().is_none() {
        return Err(GraphError::Disconnected.into());
    }
    let mut d = [pm.distance(u, v), pm.distance(u, w), pm.distance(v, w)];
    d.sort_unstable();
    let [small, mid, large] = d;
    if small >= 2 && large != mid + small {
        Ok(StarCheck::Fails {
            distances: [large, mid, small],
        })
    } else {
        Ok(StarCheck::Holds)
    }
}

/// Verdict for one connected graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Trivial {
        five: FiveArray,
        levels: LevelFunction,
        seq: MultipathSequence,
    },
    Nontrivial {
        target: ReductionTarget,
        cert: FusionCertificate,
    },
}

impl Classification {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Classification::Trivial { .. })
    }
}

/// Verdict for one connected component, with the component's vertices in the
/// original graph. Certificates and level functions use component-local
/// indices (position within the sorted vertex list).
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentClassification {
    pub vertices: Vec<usize>,
    pub classification: Classification,
}

/// Classifies a connected graph.
pub fn classify_connected(g: &Graph) -> Result<Classification, ClassifyError> {
    if let MultipathOutcome::Multipath(levels) = recognize_multipath(g)? {
        let seq = sequence_of(g, &levels)?;
        if check_proposition(&seq).is_pass() {
            let five = five_array_from_sequence(&seq)?;
            return Ok(Classification::Trivial { five, levels, seq });
        }
    }
    if let Some(obs) = find_obstruction(g)? {
        let cert = obstruction_certificate(g, &obs)?;
        let target = ReductionTarget::of_graph(&cert.target)?
            .expect("obstruction certificates end at a reduction target");
        return Ok(Classification::Nontrivial { target, cert });
    }
    // The structural search is complete for every graph we know of; the
    // bounded fusion search backs it up.
    for target in [ReductionTarget::C4, ReductionTarget::T3] {
        if let SearchOutcome::Found(cert) =
            fusion_reachable(g, &target.graph(), DEFAULT_STATE_BUDGET)?
        {
            return Ok(Classification::Nontrivial { target, cert });
        }
    }
    Err(ClassifyError::SearchBudget)
}

/// Classifies every connected component of a graph.
pub fn classify(g: &Graph) -> Result<Vec<ComponentClassification>, ClassifyError> {
    g.connected_components()
        .into_iter()
        .map(|vertices| {
            let (component, _) = g.induced_subgraph(&vertices)?;
            Ok(ComponentClassification {
                vertices,
                classification: classify_connected(&component)?,
            })
        })
        .collect()
}
