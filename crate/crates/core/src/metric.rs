//! Finite metric spaces as dense distance matrices: exact validation,
//! shortest-path repair, canonical generators, and seeded random comparison
//! instances.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("matrix of {0} entries is not square")]
    NotSquare(usize),
    #[error("metric axioms violated: {0:?}")]
    Invalid(Vec<MetricViolation>),
    #[error("cycle metric needs at least 3 points, got {0}")]
    CycleTooSmall(usize),
    #[error("star metric needs at least 2 legs of positive length")]
    BadStar,
    #[error("labeling entry {0} out of range for {1} points")]
    LabelOutOfRange(usize, usize),
    #[error("labeling covers {got} vertices but the graph has {expected}")]
    LabelArity { expected: usize, got: usize },
}

/// One failed metric axiom, with the offending indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MetricViolation {
    Asymmetric { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    Negative { i: usize, j: usize },
    Triangle { i: usize, j: usize, k: usize },
}

/// Checks symmetry, zero diagonal, nonnegativity, and every triangle
/// inequality exactly (no tolerance). Returns all violations found.
pub fn validate_metric(n: usize, d: &[f64]) -> Result<Vec<MetricViolation>, MetricError> {
    if d.len() != n * n {
        return Err(MetricError::NotSquare(d.len()));
    }
    let at = |i: usize, j: usize| d[i * n + j];
    let mut violations = Vec::new();
    for i in 0..n {
        if at(i, i) != 0.0 {
            violations.push(MetricViolation::NonzeroDiagonal { i });
        }
        for j in 0..n {
            if i < j && at(i, j) != at(j, i) {
                violations.push(MetricViolation::Asymmetric { i, j });
            }
            if i != j && !(at(i, j) >= 0.0) {
                violations.push(MetricViolation::Negative { i, j });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if at(i, j) > at(i, k) + at(k, j) {
                    violations.push(MetricViolation::Triangle { i, j, k });
                }
            }
        }
    }
    Ok(violations)
}

/// A finite metric space: symmetric, zero-diagonal, nonnegative, and
/// triangle-valid exactly as stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    d: Vec<f64>,
}

impl FiniteMetricSpace {
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self, MetricError> {
        let violations = validate_metric(n, &d)?;
        if !violations.is_empty() {
            return Err(MetricError::Invalid(violations));
        }
        Ok(FiniteMetricSpace { n, d })
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn distances(&self) -> &[f64] {
        &self.d
    }

    /// Largest pairwise distance (zero for a single point).
    pub fn max_distance(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }
}

/// Shortest-path closure of a symmetric nonnegative matrix with zero
/// diagonal: entries are relaxed through intermediate points until stable, so
/// the result satisfies every triangle inequality exactly and never exceeds
/// the input.
pub fn metric_repair(n: usize, d: &[f64]) -> Result<FiniteMetricSpace, MetricError> {
    if d.len() != n * n {
        return Err(MetricError::NotSquare(d.len()));
    }
    let pre: Vec<MetricViolation> = validate_metric(n, d)?
        .into_iter()
        .filter(|v| !matches!(v, MetricViolation::Triangle { .. }))
        .collect();
    if !pre.is_empty() {
        return Err(MetricError::Invalid(pre));
    }
    let mut m = d.to_vec();
    // Repeat full passes until a fixpoint: a pass with no change certifies
    // d[i][j] <= d[i][k] + d[k][j] for all triples in float arithmetic.
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = m[i * n + k] + m[k * n + j];
                    if via < m[i * n + j] {
                        m[i * n + j] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    FiniteMetricSpace::new(n, m)
}

/// The path metric of the `k`-cycle: `d(i, j) = min(|i - j|, k - |i - j|)`.
pub fn cycle_metric(k: usize) -> Result<FiniteMetricSpace, MetricError> {
    if k < 3 {
        return Err(MetricError::CycleTooSmall(k));
    }
    let mut d = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            let gap = i.abs_diff(j);
            d[i * k + j] = gap.min(k - gap) as f64;
        }
    }
    FiniteMetricSpace::new(k, d)
}

/// A star tree metric: point 0 at distance `r` from each of `legs` leaves,
/// leaves pairwise at distance `2r`.
pub fn star_metric(legs: usize, r: f64) -> Result<FiniteMetricSpace, MetricError> {
    if legs < 2 || !(r > 0.0) {
        return Err(MetricError::BadStar);
    }
    let n = legs + 1;
    let mut d = vec![2.0 * r; n * n];
    for i in 1..n {
        d[i] = r;
        d[i * n] = r;
    }
    for i in 0..n {
        d[i * n + i] = 0.0;
    }
    FiniteMetricSpace::new(n, d)
}

/// A graph, a finite metric space, and a labeling of graph vertices by
/// points. Repeated points are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonInstance {
    pub graph: Graph,
    pub space: FiniteMetricSpace,
    pub labeling: Vec<usize>,
}

impl ComparisonInstance {
    pub fn new(
        graph: Graph,
        space: FiniteMetricSpace,
        labeling: Vec<usize>,
    ) -> Result<Self, MetricError> {
        if labeling.len() != graph.vertex_count() {
            return Err(MetricError::LabelArity {
                expected: graph.vertex_count(),
                got: labeling.len(),
            });
        }
        if let Some(&p) = labeling.iter().find(|&&p| p >= space.point_count()) {
            return Err(MetricError::LabelOutOfRange(p, space.point_count()));
        }
        Ok(ComparisonInstance {
            graph,
            space,
            labeling,
        })
    }

    /// Distance between the labeled points of two vertices.
    pub fn labeled_distance(&self, u: usize, v: usize) -> f64 {
        self.space.distance(self.labeling[u], self.labeling[v])
    }
}

/// How [`random_instances`] samples metric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceMode {
    /// Points uniform in the unit cube of the given dimension, with the
    /// induced (repaired) Euclidean distance matrix.
    Euclidean { dim: usize },
    /// Uniform symmetric entries run through [`metric_repair`].
    RepairedRandom,
}

/// An endless, seed-deterministic stream of comparison instances for a fixed
/// graph. Each instance has one point per vertex and a labeling sampled with
/// repetition.
pub fn random_instances(
    graph: &Graph,
    mode: InstanceMode,
    seed: u64,
) -> impl Iterator<Item = ComparisonInstance> {
    let graph = graph.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::from_fn(move || {
        let n = graph.vertex_count();
        let space = match mode {
            InstanceMode::Euclidean { dim } => {
                let unit = Uniform::new(0.0f64, 1.0);
                let points: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..dim).map(|_| unit.sample(&mut rng)).collect())
                    .collect();
                let mut d = vec![0.0; n * n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let dist = points[i]
                            .iter()
                            .zip(&points[j])
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt();
                        d[i * n + j] = dist;
                        d[j * n + i] = dist;
                    }
                }
                // Float rounding can break a tight triangle by one ulp; the
                // closure restores exact validity while moving entries at
                // most that much.
                metric_repair(n, &d).expect("euclidean matrix repairs cleanly")
            }
            InstanceMode::RepairedRandom => {
                let unit = Uniform::new(0.0f64, 2.0);
                let mut d = vec![0.0; n * n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let dist = unit.sample(&mut rng);
                        d[i * n + j] = dist;
                        d[j * n + i] = dist;
                    }
                }
                metric_repair(n, &d).expect("random symmetric matrix repairs cleanly")
            }
        };
        let point = Uniform::new(0usize, n);
        let labeling = (0..n).map(|_| point.sample(&mut rng)).collect();
        Some(ComparisonInstance::new(graph.clone(), space, labeling).expect("valid by construction"))
    })
}

#[derive(Serialize, Deserialize)]
struct MetricRepr {
    n: usize,
    d: Vec<f64>,
}

impl Serialize for FiniteMetricSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MetricRepr {
            n: self.n,
            d: self.d.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteMetricSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MetricRepr::deserialize(deserializer)?;
        FiniteMetricSpace::new(repr.n, repr.d).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    graph: Graph,
    metric: FiniteMetricSpace,
    labeling: Vec<usize>,
}

impl Serialize for ComparisonInstance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        InstanceRepr {
            graph: self.graph.clone(),
            metric: self.space.clone(),
            labeling: self.labeling.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComparisonInstance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = InstanceRepr::deserialize(deserializer)?;
        ComparisonInstance::new(repr.graph, repr.metric, repr.labeling).map_err(D::Error::custom)
    }
}
