//! Multipath recognition. A connected graph is a multipath when it carries an
//! integer level function with `v ~ w  <=>  |level(v) - level(w)| <= 1` for
//! distinct vertices; such a graph is determined by the count of vertices on
//! each level.

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// An integer level per vertex. Valid for a graph when adjacency is exactly
/// "levels differ by at most one" on distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFunction {
    levels: Vec<i64>,
}

impl LevelFunction {
    pub fn new(levels: Vec<i64>) -> Self {
        LevelFunction { levels }
    }

    pub fn level(&self, v: usize) -> i64 {
        self.levels[v]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    /// Checks the defining equivalence on every pair, returning the first
    /// violating pair in lexicographic order.
    pub fn verify(&self, g: &Graph) -> Result<(), (usize, usize)> {
        let n = g.vertex_count();
        for u in 0..n {
            for v in (u + 1)..n {
                let close = (self.levels[u] - self.levels[v]).abs() <= 1;
                if close != g.adjacent(u, v) {
                    return Err((u, v));
                }
            }
        }
        Ok(())
    }

    /// Vertices on each level after shifting the minimum level to zero, in
    /// index order per level.
    pub fn strata(&self) -> Vec<Vec<usize>> {
        let min = *self.levels.iter().min().expect("nonempty");
        let max = *self.levels.iter().max().expect("nonempty");
        let mut strata = vec![Vec::new(); (max - min + 1) as usize];
        for (v, &l) in self.levels.iter().enumerate() {
            strata[(l - min) as usize].push(v);
        }
        strata
    }
}

/// The per-level vertex counts `(k_0, ..., k_m)` of a multipath; every entry
/// is positive and the entries sum to the vertex count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipathSequence {
    counts: Vec<usize>,
}

impl MultipathSequence {
    pub fn new(counts: Vec<usize>) -> Self {
        assert!(!counts.is_empty() && counts.iter().all(|&k| k > 0));
        MultipathSequence { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// The top level index `m` (one less than the number of levels).
    pub fn top_level(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total_vertices(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn reversed(&self) -> Self {
        let mut counts = self.counts.clone();
        counts.reverse();
        MultipathSequence { counts }
    }
}

/// Result of [`recognize_multipath`] on a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultipathOutcome {
    Multipath(LevelFunction),
    /// Not a multipath; carries one pair violating the candidate levels.
    NotMultipath { witness: (usize, usize) },
}

/// Decides whether a connected graph is a multipath.
///
/// Diameter at most one yields the constant-zero level function. Otherwise
/// levels are derived from the lowest-index diametral pair `(p, q)`: the
/// distance from `p` when that is at least two, else the diameter minus the
/// distance from `q` when that is at least two, else one. The candidate is
/// then verified on all pairs, so the diametral-pair choice cannot produce a
/// false positive.
pub fn recognize_multipath(g: &Graph) -> Result<MultipathOutcome, GraphError> {
    let metric = g.path_metric();
    let n = g.vertex_count();
    let diameter = metric.diameter().ok_or(GraphError::Disconnected)?;
    if diameter <= 1 {
        return Ok(MultipathOutcome::Multipath(LevelFunction::new(vec![0; n])));
    }
    let (mut p, mut q) = (0, 0);
    'outer: for u in 0..n {
        for v in (u + 1)..n {
            if metric.distance(u, v) == diameter {
                p = u;
                q = v;
                break 'outer;
            }
        }
    }
    let levels: Vec<i64> = (0..n)
        .map(|w| {
            let dp = metric.distance(p, w);
            let dq = metric.distance(q, w);
            if dp >= 2 {
                dp as i64
            } else if dq >= 2 {
                diameter as i64 - dq as i64
            } else {
                1
            }
        })
        .collect();
    let candidate = LevelFunction::new(levels);
    match candidate.verify(g) {
        Ok(()) => Ok(MultipathOutcome::Multipath(candidate)),
        Err(witness) => Ok(MultipathOutcome::NotMultipath { witness }),
    }
}

/// Counts vertices per level of a valid level function, shifted to start at
/// zero. Errors if the levels are not valid for `g` or are non-contiguous
/// (impossible for a connected graph with valid levels).
pub fn sequence_of(g: &Graph, levels: &LevelFunction) -> Result<MultipathSequence, GraphError> {
    if levels.len() != g.vertex_count() {
        return Err(GraphError::InvalidLevels(format!(
            "{} levels for {} vertices",
            levels.len(),
            g.vertex_count()
        )));
    }
    if let Err((u, v)) = levels.verify(g) {
        return Err(GraphError::InvalidLevels(format!(
            "adjacency and levels disagree on pair ({u}, {v})"
        )));
    }
    let strata = levels.strata();
    if let Some(gap) = strata.iter().position(Vec::is_empty) {
        return Err(GraphError::InvalidLevels(format!(
            "no vertices on level {gap}"
        )));
    }
    Ok(MultipathSequence::new(
        strata.iter().map(Vec::len).collect(),
    ))
}

/// The canonical multipath with the given per-level counts: vertices are laid
/// out level by level, and two vertices are adjacent exactly when their
/// levels differ by at most one.
pub fn multipath_graph(seq: &MultipathSequence) -> Graph {
    let levels = multipath_levels(seq);
    let n = levels.len();
    let mut g = Graph::empty(n).expect("sequence is nonempty");
    for u in 0..n {
        for v in (u + 1)..n {
            if (levels.level(u) - levels.level(v)).abs() <= 1 {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// The level function matching [`multipath_graph`]'s vertex layout.
pub fn multipath_levels(seq: &MultipathSequence) -> LevelFunction {
    let mut levels = Vec::with_capacity(seq.total_vertices());
    for (level, &count) in seq.counts().iter().enumerate() {
        levels.extend(std::iter::repeat(level as i64).take(count));
    }
    LevelFunction::new(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive oracle: tries every level assignment with values in
    /// `0..n`, which suffices because levels of a connected multipath span a
    /// contiguous range of length at most `n`.
    fn is_multipath_brute(g: &Graph) -> bool {
        let n = g.vertex_count();
        let mut assignment = vec![0i64; n];
        loop {
            if LevelFunction::new(assignment.clone()).verify(g).is_ok() {
                return true;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return false;
                }
                assignment[i] += 1;
                if assignment[i] < n as i64 {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn complete_graph_has_constant_levels() {
        match recognize_multipath(&Graph::complete(4)).unwrap() {
            MultipathOutcome::Multipath(l) => assert_eq!(l.levels(), &[0, 0, 0, 0]),
            other => panic!("expected multipath, got {other:?}"),
        }
    }

    #[test]
    fn path_levels_increase_along_the_path() {
        match recognize_multipath(&Graph::path(4)).unwrap() {
            MultipathOutcome::Multipath(l) => {
                assert!(l.levels() == &[0, 1, 2, 3] || l.levels() == &[3, 2, 1, 0]);
            }
            other => panic!("expected multipath, got {other:?}"),
        }
    }

    #[test]
    fn cycle_four_is_not_a_multipath() {
        // Cross-checked against the exhaustive level-assignment oracle.
        assert!(!is_multipath_brute(&Graph::cycle(4)));
        assert!(matches!(
            recognize_multipath(&Graph::cycle(4)).unwrap(),
            MultipathOutcome::NotMultipath { .. }
        ));
    }

    #[test]
    fn recognizer_agrees_with_brute_force_up_to_five() {
        for n in 1..=5 {
            for g in crate::graph::enumerate_connected_graphs(n).unwrap() {
                let got = matches!(
                    recognize_multipath(&g).unwrap(),
                    MultipathOutcome::Multipath(_)
                );
                assert_eq!(got, is_multipath_brute(&g), "disagreement on {g:?}");
            }
        }
    }

    #[test]
    fn disconnected_input_is_an_error() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(
            recognize_multipath(&g).unwrap_err(),
            GraphError::Disconnected
        );
    }

    #[test]
    fn sequence_of_small_examples() {
        let p4 = Graph::path(4);
        let MultipathOutcome::Multipath(l) = recognize_multipath(&p4).unwrap() else {
            panic!("path is a multipath");
        };
        assert_eq!(sequence_of(&p4, &l).unwrap().counts(), &[1, 1, 1, 1]);

        let k4 = Graph::complete(4);
        let MultipathOutcome::Multipath(l) = recognize_multipath(&k4).unwrap() else {
            panic!("complete graph is a multipath");
        };
        assert_eq!(sequence_of(&k4, &l).unwrap().counts(), &[4]);

        let seq = MultipathSequence::new(vec![1, 1, 2, 1, 1]);
        let g = multipath_graph(&seq);
        assert_eq!(sequence_of(&g, &multipath_levels(&seq)).unwrap(), seq);
    }

    #[test]
    fn sequence_of_rejects_invalid_levels() {
        let p3 = Graph::path(3);
        // Levels claiming the endpoints are adjacent.
        let bad = LevelFunction::new(vec![0, 1, 1]);
        assert!(sequence_of(&p3, &bad).is_err());
        let wrong_len = LevelFunction::new(vec![0, 1]);
        assert!(sequence_of(&p3, &wrong_len).is_err());
    }

    #[test]
    fn built_multipaths_round_trip_up_to_reversal() {
        let seqs = [
            vec![1, 1, 1, 1],
            vec![2, 1, 2],
            vec![1, 2, 2, 1],
            vec![3, 1, 1, 1, 2],
            vec![4],
            vec![2, 2, 2],
        ];
        for counts in seqs {
            let seq = MultipathSequence::new(counts);
            let g = multipath_graph(&seq);
            let MultipathOutcome::Multipath(l) = recognize_multipath(&g).unwrap() else {
                panic!("built multipath not recognized: {seq:?}");
            };
            let got = sequence_of(&g, &l).unwrap();
            assert!(
                got == seq || got == seq.reversed(),
                "sequence {got:?} is not {seq:?} up to reversal"
            );
        }
    }
}
