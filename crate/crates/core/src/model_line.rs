//! Explicit real-line models for trivial graphs.
//!
//! Each edge inherits the distance of its labeled endpoints as a weight; the
//! weighted shortest-path distance from a special vertex, signed by level,
//! places every vertex on the real line. For graphs passing the structure
//! conditions this configuration always satisfies the comparison.

use thiserror::Error;

use crate::classify::{check_proposition, PropositionCheck};
use crate::graph::{
    recognize_multipath, sequence_of, Graph, GraphError, LevelFunction, MultipathOutcome,
    MultipathSequence,
};
use crate::metric::ComparisonInstance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is nontrivial; no line model exists in general")]
    Nontrivial,
    #[error("level function does not fit the graph")]
    LevelMismatch,
}

/// All-pairs weighted shortest-path distances over the graph's edges, each
/// edge weighted by the distance between its labeled endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDistances {
    n: usize,
    d: Vec<f64>,
}

impl WeightedDistances {
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }
}

/// Computes weighted shortest paths by relaxation to a fixpoint. Errors on a
/// disconnected graph.
pub fn weighted_distances(inst: &ComparisonInstance) -> Result<WeightedDistances, ModelError> {
    let g = &inst.graph;
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let n = g.vertex_count();
    let mut d = vec![f64::INFINITY; n * n];
    for u in 0..n {
        d[u * n + u] = 0.0;
        for v in 0..n {
            if g.adjacent(u, v) {
                d[u * n + v] = inst.labeled_distance(u, v);
            }
        }
    }
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i * n + k] + d[k * n + j];
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(WeightedDistances { n, d })
}

/// Picks the model's special vertex: unique on its level and close to the
/// middle. With five or more levels that is the level-2 vertex; with exactly
/// four levels, the singleton middle level (preferring level 2); with three
/// levels, the middle if it is a singleton, then the lowest singleton level;
/// complete graphs take vertex 0.
pub fn choose_special_vertex(
    g: &Graph,
    levels: &LevelFunction,
    seq: &MultipathSequence,
) -> Result<usize, ModelError> {
    if levels.len() != g.vertex_count() || seq.total_vertices() != g.vertex_count() {
        return Err(ModelError::LevelMismatch);
    }
    if !check_proposition(seq).is_pass() {
        return Err(ModelError::Nontrivial);
    }
    let k = seq.counts();
    let strata = levels.strata();
    let m = seq.top_level();
    let vertex = match m {
        0 | 1 => 0,
        2 => {
            if k[1] == 1 {
                strata[1][0]
            } else if k[0] == 1 {
                strata[0][0]
            } else {
                strata[2][0]
            }
        }
        _ => {
            if k[2] == 1 {
                strata[2][0]
            } else {
                // Four levels with a wide third level force a singleton
                // second level.
                strata[1][0]
            }
        }
    };
    Ok(vertex)
}

/// Places every vertex at its signed weighted distance from the special
/// vertex: positive for strictly higher levels, negative otherwise.
pub fn build_line_model(
    inst: &ComparisonInstance,
    special: usize,
    levels: &LevelFunction,
) -> Result<Vec<f64>, ModelError> {
    let n = inst.graph.vertex_count();
    if levels.len() != n || special >= n {
        return Err(ModelError::LevelMismatch);
    }
    let wd = weighted_distances(inst)?;
    let anchor_level = levels.level(special);
    let coords: Vec<f64> = (0..n)
        .map(|v| {
            let dist = wd.distance(special, v);
            if levels.level(v) > anchor_level {
                dist
            } else {
                -dist
            }
        })
        .collect();
    #[cfg(debug_assertions)]
    {
        let rows: Vec<Vec<f64>> = coords.iter().map(|&x| vec![x]).collect();
        let violation = crate::feasibility::verify_model(inst, &rows)
            .expect("coordinate arity matches by construction");
        let scale = inst.space.max_distance().max(1.0);
        debug_assert!(
            violation <= 1e-9 * scale,
            "line model violated the comparison by {violation}"
        );
    }
    Ok(coords)
}

/// Full pipeline for a trivial connected graph: recognize the level
/// structure, pick the special vertex, and build the model. Errors with
/// [`ModelError::Nontrivial`] when no line model is guaranteed.
pub fn line_model(inst: &ComparisonInstance) -> Result<Vec<f64>, ModelError> {
    let MultipathOutcome::Multipath(levels) = recognize_multipath(&inst.graph)? else {
        return Err(ModelError::Nontrivial);
    };
    let seq = sequence_of(&inst.graph, &levels)?;
    if !matches!(check_proposition(&seq), PropositionCheck::Pass) {
        return Err(ModelError::Nontrivial);
    }
    let special = choose_special_vertex(&inst.graph, &levels, &seq)?;
    build_line_model(inst, special, &levels)
}
