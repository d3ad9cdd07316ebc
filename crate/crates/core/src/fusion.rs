//! Vertex fusion and fusion certificates.
//!
//! Fusing two vertices replaces them with a single new vertex: neighbors of
//! both stay adjacent, neighbors of neither stay nonadjacent, and each
//! "mixed" neighbor (adjacent to exactly one) gets an explicit choice. A
//! [`FusionCertificate`] is a replayable sequence of such steps from a source
//! graph down to a target; reachability over all fusion sequences is decided
//! by breadth-first search with canonical-form deduplication.
//!
//! Fusions of adjacent pairs are always allowed. For a non-adjacent pair the
//! step is accepted only when every mixed choice copies one fixed endpoint's
//! relations (the step then just deletes the other endpoint), since free
//! choices on non-adjacent pairs carry no soundness argument.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{canonical_bits, find_isomorphism, Graph, GraphError};

/// Default cap on the number of states a fusion search may create.
pub const DEFAULT_STATE_BUDGET: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error("cannot fuse a vertex with itself ({0})")]
    SameVertex(usize),
    #[error("vertex {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("missing choice for mixed neighbor {0}")]
    MissingChoice(usize),
    #[error("vertex {0} is not a mixed neighbor but has a choice entry")]
    ForcedChoice(usize),
    #[error("non-adjacent fusion requires all choices to copy one endpoint's relations")]
    NonAdjacentFreeChoices,
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("certificate replay ended at a graph not isomorphic to the target")]
    TargetMismatch,
    #[error("certificates do not chain: intermediate graphs are not isomorphic")]
    ChainMismatch,
    #[error("labeling covers {got} vertices but the target has {expected}")]
    PartialLabels { expected: usize, got: usize },
    #[error("target has more vertices than the source")]
    TargetTooLarge,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Relation chosen for a mixed neighbor of a fused pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedChoice {
    #[serde(rename = "adj")]
    Adjacent,
    #[serde(rename = "non")]
    Nonadjacent,
}

/// One fusion step: the pair to fuse and a relation choice for exactly the
/// mixed neighbors. Forced neighbors (adjacent to both or to neither) carry
/// no entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionStep {
    pub v1: usize,
    pub v2: usize,
    pub choices: BTreeMap<usize, MixedChoice>,
}

/// Result of one fusion: the smaller graph, the index of the new vertex, and
/// the map from old indices to new ones (both fused vertices map to the new
/// vertex).
#[derive(Debug, Clone)]
pub struct FusionOutcome {
    pub graph: Graph,
    pub fused_index: usize,
    pub vertex_map: Vec<usize>,
}

fn mixed_neighbors(g: &Graph, v1: usize, v2: usize) -> Vec<usize> {
    (0..g.vertex_count())
        .filter(|&u| u != v1 && u != v2 && g.adjacent(u, v1) != g.adjacent(u, v2))
        .collect()
}

/// Applies one fusion step. Surviving vertices keep their mutual relations
/// and are renumbered in increasing order; the new vertex takes the last
/// index.
pub fn fuse(g: &Graph, step: &FusionStep) -> Result<FusionOutcome, FusionError> {
    let n = g.vertex_count();
    let (v1, v2) = (step.v1, step.v2);
    if v1 == v2 {
        return Err(FusionError::SameVertex(v1));
    }
    for &v in &[v1, v2] {
        if v >= n {
            return Err(FusionError::VertexOutOfRange(v, n));
        }
    }
    let mixed = mixed_neighbors(g, v1, v2);
    for &u in step.choices.keys() {
        if !mixed.contains(&u) {
            return Err(FusionError::ForcedChoice(u));
        }
    }
    for &u in &mixed {
        if !step.choices.contains_key(&u) {
            return Err(FusionError::MissingChoice(u));
        }
    }
    if !g.adjacent(v1, v2) {
        let copies = |anchor: usize| {
            mixed.iter().all(|&u| {
                (step.choices[&u] == MixedChoice::Adjacent) == g.adjacent(u, anchor)
            })
        };
        if !copies(v1) && !copies(v2) {
            return Err(FusionError::NonAdjacentFreeChoices);
        }
    }

    let survivors: Vec<usize> = (0..n).filter(|&u| u != v1 && u != v2).collect();
    let fused_index = n - 2;
    let mut vertex_map = vec![fused_index; n];
    for (rank, &u) in survivors.iter().enumerate() {
        vertex_map[u] = rank;
    }
    let mut out = Graph::empty(n - 1)?;
    for (i, &u) in survivors.iter().enumerate() {
        for (j, &v) in survivors.iter().enumerate().skip(i + 1) {
            if g.adjacent(u, v) {
                out.set_edge(i, j, true);
            }
        }
        let to_new = (g.adjacent(u, v1) && g.adjacent(u, v2))
            || step.choices.get(&u) == Some(&MixedChoice::Adjacent);
        if to_new {
            out.set_edge(i, fused_index, true);
        }
    }
    Ok(FusionOutcome {
        graph: out,
        fused_index,
        vertex_map,
    })
}

/// The fusion step that deletes `victim` by fusing it into an adjacent
/// `host`: every mixed choice copies the host's relation, so the result is
/// the graph with `victim` removed (host keeps its relations to all
/// survivors).
pub fn absorb(g: &Graph, victim: usize, host: usize) -> Result<FusionStep, FusionError> {
    let n = g.vertex_count();
    for &v in &[victim, host] {
        if v >= n {
            return Err(FusionError::VertexOutOfRange(v, n));
        }
    }
    if victim == host {
        return Err(FusionError::SameVertex(victim));
    }
    if !g.adjacent(victim, host) {
        return Err(FusionError::NotAdjacent(victim, host));
    }
    let choices = mixed_neighbors(g, victim, host)
        .into_iter()
        .map(|u| {
            let rel = if g.adjacent(u, host) {
                MixedChoice::Adjacent
            } else {
                MixedChoice::Nonadjacent
            };
            (u, rel)
        })
        .collect();
    Ok(FusionStep {
        v1: victim,
        v2: host,
        choices,
    })
}

/// A replayable witness that the target is reachable from the source by
/// vertex fusions. Step `k` is indexed against the graph produced by step
/// `k - 1` (step 0 against the source).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionCertificate {
    pub source: Graph,
    pub steps: Vec<FusionStep>,
    pub target: Graph,
}

/// Everything a successful replay yields: the final graph, the composed map
/// from source vertices to final vertices, and an isomorphism onto the
/// stated target.
#[derive(Debug, Clone)]
pub struct CertificateReplay {
    pub final_graph: Graph,
    pub vertex_map: Vec<usize>,
    pub iso_to_target: Vec<usize>,
}

impl FusionCertificate {
    pub fn identity(g: Graph) -> Self {
        FusionCertificate {
            source: g.clone(),
            steps: Vec::new(),
            target: g,
        }
    }

    /// Replays every step and matches the result against the target.
    pub fn replay(&self) -> Result<CertificateReplay, FusionError> {
        let mut graph = self.source.clone();
        let mut vertex_map: Vec<usize> = (0..graph.vertex_count()).collect();
        for step in &self.steps {
            let out = fuse(&graph, step)?;
            for slot in vertex_map.iter_mut() {
                *slot = out.vertex_map[*slot];
            }
            graph = out.graph;
        }
        let iso_to_target =
            find_isomorphism(&graph, &self.target)?.ok_or(FusionError::TargetMismatch)?;
        Ok(CertificateReplay {
            final_graph: graph,
            vertex_map,
            iso_to_target,
        })
    }
}

/// True exactly when replaying the certificate succeeds and ends at a graph
/// isomorphic to its target.
pub fn verify_certificate(cert: &FusionCertificate) -> bool {
    cert.replay().is_ok()
}

/// A certificate from a connected graph to the subgraph induced by `subset`,
/// built by absorbing each outside vertex into a neighbor. Victims are taken
/// farthest-from-the-subset first, which keeps every remaining outside vertex
/// connected to the subset; hosts prefer outside neighbors.
pub fn induced_certificate(g: &Graph, subset: &[usize]) -> Result<FusionCertificate, FusionError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let (target, sorted) = g.induced_subgraph(subset)?;
    let mut inside = vec![false; g.vertex_count()];
    for &v in &sorted {
        inside[v] = true;
    }
    let mut current = g.clone();
    let mut steps = Vec::new();
    loop {
        let n = current.vertex_count();
        let outside: Vec<usize> = (0..n).filter(|&v| !inside[v]).collect();
        if outside.is_empty() {
            break;
        }
        // Multi-source BFS from the subset.
        let mut dist = vec![usize::MAX; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| inside[v]).collect();
        for &v in &queue {
            dist[v] = 0;
        }
        while let Some(u) = queue.pop_front() {
            for v in current.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let &victim = outside
            .iter()
            .max_by_key(|&&v| (dist[v], std::cmp::Reverse(v)))
            .expect("outside is nonempty");
        debug_assert!(dist[victim] != usize::MAX, "outside vertex lost contact");
        let host = current
            .neighbors(victim)
            .find(|&u| !inside[u])
            .or_else(|| current.neighbors(victim).next())
            .expect("victim is connected to the subset");
        let step = absorb(&current, victim, host)?;
        let out = fuse(&current, &step)?;
        let mut next_inside = vec![false; n - 1];
        for v in 0..n {
            if v != victim && inside[v] {
                next_inside[out.vertex_map[v]] = true;
            }
        }
        inside = next_inside;
        current = out.graph;
        steps.push(step);
    }
    debug_assert_eq!(
        canonical_bits(&current),
        canonical_bits(&target),
        "absorption altered the induced subgraph"
    );
    Ok(FusionCertificate {
        source: g.clone(),
        steps,
        target,
    })
}

/// Outcome of a bounded fusion-reachability search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(FusionCertificate),
    /// The whole reachable space was explored without meeting the target.
    Exhausted,
    /// The state budget ran out before the search was complete.
    BudgetExceeded,
}

struct SearchState {
    graph: Graph,
    parent: usize,
    step: Option<FusionStep>,
}

/// Breadth-first search over all fusions of adjacent pairs (every pair, every
/// mixed-choice assignment), deduplicating states by canonical form. Returns
/// a shortest certificate to any graph isomorphic to `target`; ties are
/// resolved by expansion order, pairs in lexicographic order and choice
/// bitmasks ascending.
pub fn fusion_reachable(
    g: &Graph,
    target: &Graph,
    max_states: usize,
) -> Result<SearchOutcome, FusionError> {
    if target.vertex_count() > g.vertex_count() {
        return Err(FusionError::TargetTooLarge);
    }
    let target_key = (target.vertex_count(), canonical_bits(target)?);
    // A disconnected state can never reach a connected target: fusions act
    // within components and components never vanish.
    let prune_disconnected = target.is_connected();

    let build_certificate = |states: &[SearchState], mut at: usize| {
        let mut steps = Vec::new();
        while let Some(step) = &states[at].step {
            steps.push(step.clone());
            at = states[at].parent;
        }
        steps.reverse();
        FusionCertificate {
            source: g.clone(),
            steps,
            target: target.clone(),
        }
    };

    let mut states = vec![SearchState {
        graph: g.clone(),
        parent: 0,
        step: None,
    }];
    let mut seen: HashSet<(usize, u64)> = HashSet::new();
    seen.insert((g.vertex_count(), canonical_bits(g)?));
    if (g.vertex_count(), canonical_bits(g)?) == target_key {
        return Ok(SearchOutcome::Found(build_certificate(&states, 0)));
    }

    let mut cursor = 0;
    while cursor < states.len() {
        let n = states[cursor].graph.vertex_count();
        if n <= target.vertex_count() {
            cursor += 1;
            continue;
        }
        let parent = states[cursor].graph.clone();
        for v1 in 0..n {
            for v2 in (v1 + 1)..n {
                if !parent.adjacent(v1, v2) {
                    continue;
                }
                let mixed = mixed_neighbors(&parent, v1, v2);
                for mask in 0u32..(1 << mixed.len()) {
                    let choices = mixed
                        .iter()
                        .enumerate()
                        .map(|(bit, &u)| {
                            let rel = if mask & (1 << bit) != 0 {
                                MixedChoice::Adjacent
                            } else {
                                MixedChoice::Nonadjacent
                            };
                            (u, rel)
                        })
                        .collect();
                    let step = FusionStep { v1, v2, choices };
                    let out = fuse(&parent, &step)?;
                    if prune_disconnected && !out.graph.is_connected() {
                        continue;
                    }
                    let key = (out.graph.vertex_count(), canonical_bits(&out.graph)?);
                    if !seen.insert(key) {
                        continue;
                    }
                    if states.len() >= max_states {
                        return Ok(SearchOutcome::BudgetExceeded);
                    }
                    states.push(SearchState {
                        graph: out.graph,
                        parent: cursor,
                        step: Some(step),
                    });
                    if key == target_key {
                        return Ok(SearchOutcome::Found(
                            build_certificate(&states, states.len() - 1),
                        ));
                    }
                }
            }
        }
        cursor += 1;
    }
    Ok(SearchOutcome::Exhausted)
}

/// Pulls a labeling of the certificate's target back to its source: each
/// source vertex receives the point of its image under the composed fusion
/// maps, so fused preimages share one point.
pub fn lift_labeling(cert: &FusionCertificate, labels: &[usize]) -> Result<Vec<usize>, FusionError> {
    if labels.len() != cert.target.vertex_count() {
        return Err(FusionError::PartialLabels {
            expected: cert.target.vertex_count(),
            got: labels.len(),
        });
    }
    let replay = cert.replay()?;
    Ok(replay
        .vertex_map
        .iter()
        .map(|&image| labels[replay.iso_to_target[image]])
        .collect())
}

/// Chains two certificates. The second certificate's source must be
/// isomorphic to the first's target; its steps are translated through the
/// isomorphism so the combined steps replay from the first source directly.
pub fn concat_certificates(
    first: &FusionCertificate,
    second: &FusionCertificate,
) -> Result<FusionCertificate, FusionError> {
    let replay = first.replay()?;
    // Maps current second-side vertices onto current first-side vertices.
    let mut phi = find_isomorphism(&second.source, &replay.final_graph)?
        .ok_or(FusionError::ChainMismatch)?;
    let mut steps = first.steps.clone();
    let mut side_b = second.source.clone();
    let mut side_a = replay.final_graph;
    for step in &second.steps {
        let translated = FusionStep {
            v1: phi[step.v1],
            v2: phi[step.v2],
            choices: step
                .choices
                .iter()
                .map(|(&u, &rel)| (phi[u], rel))
                .collect(),
        };
        let out_b = fuse(&side_b, step)?;
        let out_a = fuse(&side_a, &translated)?;
        let mut next_phi = vec![0; out_b.graph.vertex_count()];
        for (u, &image) in phi.iter().enumerate() {
            next_phi[out_b.vertex_map[u]] = out_a.vertex_map[image];
        }
        phi = next_phi;
        side_b = out_b.graph;
        side_a = out_a.graph;
        steps.push(translated);
    }
    Ok(FusionCertificate {
        source: first.source.clone(),
        steps,
        target: second.target.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_connected_graphs, isomorphic};

    fn both_adjacent(g: &Graph, v1: usize, v2: usize) -> FusionStep {
        let choices = mixed_neighbors(g, v1, v2)
            .into_iter()
            .map(|u| (u, MixedChoice::Adjacent))
            .collect();
        FusionStep { v1, v2, choices }
    }

    #[test]
    fn fusing_a_cycle_edge_shrinks_the_cycle() {
        let c5 = Graph::cycle(5);
        let out = fuse(&c5, &both_adjacent(&c5, 0, 1)).unwrap();
        assert_eq!(out.fused_index, 3);
        assert!(isomorphic(&out.graph, &Graph::cycle(4)).unwrap());
    }

    #[test]
    fn fusing_the_fan_rim_yields_a_tripod() {
        // Rim 1-2-3-4, hub 0: fusing the middle rim edge with both mixed rim
        // ends kept nonadjacent leaves the hub with three pendant neighbors.
        let fan = Graph::fan();
        let step = FusionStep {
            v1: 2,
            v2: 3,
            choices: [(1, MixedChoice::Nonadjacent), (4, MixedChoice::Nonadjacent)]
                .into_iter()
                .collect(),
        };
        let out = fuse(&fan, &step).unwrap();
        assert!(isomorphic(&out.graph, &Graph::tripod()).unwrap());
    }

    #[test]
    fn fusing_a_triangle_edge_has_no_mixed_neighbors() {
        let k3 = Graph::complete(3);
        assert!(mixed_neighbors(&k3, 0, 1).is_empty());
        let out = fuse(&k3, &both_adjacent(&k3, 0, 1)).unwrap();
        assert!(isomorphic(&out.graph, &Graph::complete(2)).unwrap());
    }

    #[test]
    fn fuse_rejects_malformed_steps() {
        let c5 = Graph::cycle(5);
        let mut step = both_adjacent(&c5, 0, 1);
        step.choices.remove(&2);
        assert!(matches!(
            fuse(&c5, &step),
            Err(FusionError::MissingChoice(2))
        ));

        let mut step = both_adjacent(&c5, 0, 1);
        step.choices.insert(3, MixedChoice::Adjacent);
        assert!(matches!(fuse(&c5, &step), Err(FusionError::ForcedChoice(3))));

        let step = FusionStep {
            v1: 2,
            v2: 2,
            choices: BTreeMap::new(),
        };
        assert!(matches!(fuse(&c5, &step), Err(FusionError::SameVertex(2))));
    }

    #[test]
    fn non_adjacent_fusion_needs_aligned_choices() {
        let p5 = Graph::path(5);
        // The endpoints are non-adjacent; mixed neighbors are 1 and 3.
        let free = FusionStep {
            v1: 0,
            v2: 4,
            choices: [(1, MixedChoice::Adjacent), (3, MixedChoice::Adjacent)]
                .into_iter()
                .collect(),
        };
        assert!(matches!(
            fuse(&p5, &free),
            Err(FusionError::NonAdjacentFreeChoices)
        ));
        // Copying vertex 0's relations is the deletion of vertex 4.
        let aligned = FusionStep {
            v1: 0,
            v2: 4,
            choices: [(1, MixedChoice::Adjacent), (3, MixedChoice::Nonadjacent)]
                .into_iter()
                .collect(),
        };
        let out = fuse(&p5, &aligned).unwrap();
        assert!(isomorphic(&out.graph, &Graph::path(4)).unwrap());
    }

    #[test]
    fn fuse_preserves_survivor_relations_exhaustively() {
        for n in 2..=5 {
            for g in enumerate_connected_graphs(n).unwrap() {
                for (v1, v2) in g.edges() {
                    let mixed = mixed_neighbors(&g, v1, v2);
                    for mask in 0u32..(1 << mixed.len()) {
                        let choices = mixed
                            .iter()
                            .enumerate()
                            .map(|(bit, &u)| {
                                let rel = if mask & (1 << bit) != 0 {
                                    MixedChoice::Adjacent
                                } else {
                                    MixedChoice::Nonadjacent
                                };
                                (u, rel)
                            })
                            .collect();
                        let out = fuse(&g, &FusionStep { v1, v2, choices }).unwrap();
                        for u in 0..n {
                            for v in (u + 1)..n {
                                if u == v1 || u == v2 || v == v1 || v == v2 {
                                    continue;
                                }
                                assert_eq!(
                                    g.adjacent(u, v),
                                    out.graph
                                        .adjacent(out.vertex_map[u], out.vertex_map[v])
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn absorb_examples() {
        let c5 = Graph::cycle(5);
        let out = fuse(&c5, &absorb(&c5, 0, 1).unwrap()).unwrap();
        assert!(isomorphic(&out.graph, &Graph::path(4)).unwrap());

        let star = Graph::star(3);
        let out = fuse(&star, &absorb(&star, 1, 0).unwrap()).unwrap();
        assert!(isomorphic(&out.graph, &Graph::star(2)).unwrap());

        let k4 = Graph::complete(4);
        let out = fuse(&k4, &absorb(&k4, 3, 0).unwrap()).unwrap();
        assert!(isomorphic(&out.graph, &Graph::complete(3)).unwrap());

        assert!(matches!(
            absorb(&Graph::path(3), 0, 2),
            Err(FusionError::NotAdjacent(0, 2))
        ));
    }

    #[test]
    fn absorb_equals_vertex_deletion_exhaustively() {
        for n in 2..=6 {
            for g in enumerate_connected_graphs(n).unwrap() {
                for (a, b) in g.edges() {
                    for (victim, host) in [(a, b), (b, a)] {
                        let out = fuse(&g, &absorb(&g, victim, host).unwrap()).unwrap();
                        let rest: Vec<usize> =
                            (0..n).filter(|&v| v != victim).collect();
                        let (deleted, _) = g.induced_subgraph(&rest).unwrap();
                        assert!(isomorphic(&out.graph, &deleted).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn induced_certificate_examples() {
        let c5 = Graph::cycle(5);
        let cert = induced_certificate(&c5, &[0, 1, 2, 3]).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert!(verify_certificate(&cert));
        assert!(isomorphic(&cert.target, &Graph::path(4)).unwrap());

        let all = induced_certificate(&c5, &[0, 1, 2, 3, 4]).unwrap();
        assert!(all.steps.is_empty());
        assert!(verify_certificate(&all));

        let fan = Graph::fan();
        let cert = induced_certificate(&fan, &[1, 2, 3, 4]).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert!(verify_certificate(&cert));
        assert!(isomorphic(&cert.target, &Graph::path(4)).unwrap());

        let disconnected = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(induced_certificate(&disconnected, &[0]).is_err());
    }

    #[test]
    fn induced_certificates_verify_for_all_small_subsets() {
        for n in 2..=6 {
            for g in enumerate_connected_graphs(n).unwrap() {
                for mask in 1u32..(1 << n) {
                    let subset: Vec<usize> =
                        (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                    let cert = induced_certificate(&g, &subset).unwrap();
                    assert!(verify_certificate(&cert), "subset {subset:?} of {g:?}");
                    assert_eq!(cert.steps.len(), n - subset.len());
                }
            }
        }
    }

    #[test]
    fn certificate_verification_catches_bad_steps() {
        let c5 = Graph::cycle(5);
        let good = induced_certificate(&c5, &[0, 1, 2, 3]).unwrap();
        assert!(verify_certificate(&good));

        let mut missing = good.clone();
        missing.steps[0].choices.clear();
        assert!(!verify_certificate(&missing));

        let mut wrong_target = good;
        wrong_target.target = Graph::cycle(4);
        assert!(!verify_certificate(&wrong_target));

        assert!(verify_certificate(&FusionCertificate::identity(c5)));
    }

    #[test]
    fn reachability_examples() {
        let found = fusion_reachable(&Graph::cycle(5), &Graph::cycle(4), DEFAULT_STATE_BUDGET)
            .unwrap();
        let SearchOutcome::Found(cert) = found else {
            panic!("C4 should be one fusion away from C5");
        };
        assert_eq!(cert.steps.len(), 1);
        assert!(verify_certificate(&cert));

        let identity =
            fusion_reachable(&Graph::cycle(4), &Graph::cycle(4), DEFAULT_STATE_BUDGET).unwrap();
        let SearchOutcome::Found(cert) = identity else {
            panic!("identity reachability");
        };
        assert!(cert.steps.is_empty());

        // K4 is trivial, so the four-cycle is not reachable from it.
        assert!(matches!(
            fusion_reachable(&Graph::complete(4), &Graph::cycle(4), DEFAULT_STATE_BUDGET).unwrap(),
            SearchOutcome::Exhausted
        ));

        assert!(matches!(
            fusion_reachable(&Graph::cycle(6), &Graph::cycle(4), 2).unwrap(),
            SearchOutcome::BudgetExceeded
        ));

        assert!(matches!(
            fusion_reachable(&Graph::cycle(4), &Graph::cycle(5), DEFAULT_STATE_BUDGET),
            Err(FusionError::TargetTooLarge)
        ));
    }

    #[test]
    fn lift_labeling_through_certificates() {
        let c5 = Graph::cycle(5);
        let SearchOutcome::Found(cert) =
            fusion_reachable(&c5, &Graph::cycle(4), DEFAULT_STATE_BUDGET).unwrap()
        else {
            panic!("C5 reduces to C4");
        };
        let labels = vec![10, 11, 12, 13];
        let lifted = lift_labeling(&cert, &labels).unwrap();
        assert_eq!(lifted.len(), 5);
        // Exactly the fused pair shares a point.
        let mut sorted = lifted.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
        let (v1, v2) = (cert.steps[0].v1, cert.steps[0].v2);
        assert_eq!(lifted[v1], lifted[v2]);

        let identity = FusionCertificate::identity(Graph::cycle(4));
        assert_eq!(
            lift_labeling(&identity, &labels).unwrap(),
            labels
        );

        assert!(matches!(
            lift_labeling(&identity, &[0, 1]),
            Err(FusionError::PartialLabels { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn two_step_lift_composes_vertex_maps() {
        let c6 = Graph::cycle(6);
        let SearchOutcome::Found(cert) =
            fusion_reachable(&c6, &Graph::cycle(4), DEFAULT_STATE_BUDGET).unwrap()
        else {
            panic!("C6 reduces to C4");
        };
        assert_eq!(cert.steps.len(), 2);
        let replay = cert.replay().unwrap();
        let labels = vec![0, 1, 2, 3];
        let lifted = lift_labeling(&cert, &labels).unwrap();
        for v in 0..6 {
            assert_eq!(lifted[v], labels[replay.iso_to_target[replay.vertex_map[v]]]);
        }
    }

    #[test]
    fn concatenation_replays_end_to_end() {
        let c6 = Graph::cycle(6);
        let first = induced_certificate(&c6, &[0, 1, 2, 3, 4]).unwrap();
        // First certificate ends at a 5-path; chain it with a fusion of that
        // path down to a 4-path.
        let p5 = Graph::path(5);
        let second = induced_certificate(&p5, &[0, 1, 2, 3]).unwrap();
        let combined = concat_certificates(&first, &second).unwrap();
        assert_eq!(combined.steps.len(), 2);
        assert!(verify_certificate(&combined));
        assert!(isomorphic(&combined.target, &Graph::path(4)).unwrap());
    }

    #[test]
    fn step_json_uses_named_relations() {
        let step = FusionStep {
            v1: 0,
            v2: 1,
            choices: [(2, MixedChoice::Adjacent), (4, MixedChoice::Nonadjacent)]
                .into_iter()
                .collect(),
        };
        let json = serde_json::to_string(&step).unwrap();
        assert_eq!(json, r#"{"v1":0,"v2":1,"choices":{"2":"adj","4":"non"}}"#);
        let back: FusionStep = serde_json::from_str(&json).unwrap();
        assert_eq!(back, step);
    }
}
