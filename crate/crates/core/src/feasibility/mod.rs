//! Numerical decision of the comparison condition for one labeled instance.
//!
//! A model configuration exists exactly when some assignment of squared
//! distances — bounded above on edges and below on non-edges by the labeled
//! distances — has a positive semidefinite anchored Gram transform. The
//! solver runs Dykstra's alternating projections over the semidefinite cone
//! and one halfspace per vertex pair, reporting a verified embedding on
//! success and a stabilized residual gap when the constraint sets provably
//! fail to meet.

mod eig;

pub use eig::{jacobi_eigen, Eigen, EigenError, SymMatrix};

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metric::ComparisonInstance;

const JACOBI_SWEEPS: usize = 100;
/// Residual history length over which stabilization is judged.
const STABILITY_WINDOW: usize = 100;
/// Cadence of speculative embedding checks while the residual is still high.
const EMBED_CHECK_PERIOD: u64 = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeasibilityError {
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("matrix is not positive semidefinite (minimum eigenvalue {0})")]
    NotPsd(f64),
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
    #[error("expected {expected} coordinate rows, got {got}")]
    CoordArity { expected: usize, got: usize },
    #[error("coordinate rows have mixed dimensions")]
    CoordDims,
    #[error("squared-distance matrix must be symmetric with zero diagonal")]
    BadSquaredDistances,
}

/// Solver parameters. `tol` bounds accepted model violations, and a
/// stabilized residual of at least `infeas_margin` on every restart is
/// required before declaring infeasibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub infeas_margin: f64,
    pub max_iter: u64,
    pub restarts: u32,
    pub eig_tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-7,
            infeas_margin: 1e-3,
            max_iter: 20_000,
            restarts: 5,
            eig_tol: 1e-12,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), FeasibilityError> {
        if !(self.tol > 0.0) {
            return Err(FeasibilityError::BadConfig("tol must be positive".into()));
        }
        if !(self.infeas_margin > self.tol) {
            return Err(FeasibilityError::BadConfig(
                "infeas_margin must exceed tol".into(),
            ));
        }
        if self.max_iter == 0 || self.restarts == 0 {
            return Err(FeasibilityError::BadConfig(
                "max_iter and restarts must be positive".into(),
            ));
        }
        if !(self.eig_tol > 0.0) {
            return Err(FeasibilityError::BadConfig(
                "eig_tol must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Gram matrix anchored at point 0: entry `(i, j)` is the inner product of
/// points `i + 1` and `j + 1` with point 0 at the origin, so squared model
/// distances read off linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(pub SymMatrix);

impl GramMatrix {
    /// Point count including the anchor.
    pub fn point_count(&self) -> usize {
        self.0.dim() + 1
    }

    /// The anchored transform of a squared-distance matrix:
    /// `G(i, j) = (s(0,i) + s(0,j) - s(i,j)) / 2`.
    pub fn from_squared_distances(n: usize, s: &[f64]) -> Result<Self, FeasibilityError> {
        if n == 0 || s.len() != n * n {
            return Err(FeasibilityError::BadSquaredDistances);
        }
        for i in 0..n {
            if s[i * n + i] != 0.0 {
                return Err(FeasibilityError::BadSquaredDistances);
            }
            for j in (i + 1)..n {
                if s[i * n + j] != s[j * n + i] {
                    return Err(FeasibilityError::BadSquaredDistances);
                }
            }
        }
        let mut g = SymMatrix::zeros(n - 1);
        for i in 1..n {
            for j in i..n {
                g.set(i - 1, j - 1, 0.5 * (s[i] + s[j] - s[i * n + j]));
            }
        }
        Ok(GramMatrix(g))
    }

    /// Squared model distance between two points (0 is the anchor).
    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let g = &self.0;
        match (i, j) {
            (0, k) | (k, 0) => g.get(k - 1, k - 1),
            (a, b) => g.get(a - 1, a - 1) + g.get(b - 1, b - 1) - 2.0 * g.get(a - 1, b - 1),
        }
    }
}

/// Nearest positive semidefinite matrix: eigendecompose with cyclic Jacobi
/// rotations and clip negative eigenvalues to zero.
pub fn project_psd(m: &SymMatrix, eig_tol: f64) -> Result<SymMatrix, FeasibilityError> {
    let eigen = jacobi_eigen(m, eig_tol, JACOBI_SWEEPS)?;
    Ok(eigen.recompose(|x| x.max(0.0)))
}

/// Coordinates realizing a Gram matrix that is positive semidefinite within
/// `eig_tol` (relative to its scale): one point per row, the anchor at the
/// origin, and one dimension per eigenvalue above the tolerance.
pub fn embed_gram(g: &GramMatrix, eig_tol: f64) -> Result<Vec<Vec<f64>>, FeasibilityError> {
    let dim = g.0.dim();
    if dim == 0 {
        return Ok(vec![vec![]]);
    }
    let eigen = jacobi_eigen(&g.0, eig_tol, JACOBI_SWEEPS)?;
    let scale = g.0.frobenius_norm().max(1.0);
    let min = eigen.min_value();
    if min < -eig_tol * scale {
        return Err(FeasibilityError::NotPsd(min));
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigen.values[b].total_cmp(&eigen.values[a]));
    let rank = order
        .iter()
        .filter(|&&k| eigen.values[k] > eig_tol * scale)
        .count()
        .max(1);
    let mut coords = Vec::with_capacity(dim + 1);
    coords.push(vec![0.0; rank]);
    for i in 0..dim {
        coords.push(
            order[..rank]
                .iter()
                .map(|&k| eigen.values[k].max(0.0).sqrt() * eigen.vector_component(i, k))
                .collect(),
        );
    }
    Ok(coords)
}

/// True exactly when the squared-distance matrix embeds isometrically in
/// Hilbert space: its anchored Gram transform is positive semidefinite
/// within `tol`.
pub fn negative_type_check(n: usize, s: &[f64], tol: f64) -> Result<bool, FeasibilityError> {
    let gram = GramMatrix::from_squared_distances(n, s)?;
    if gram.0.dim() == 0 {
        return Ok(true);
    }
    let eigen = jacobi_eigen(&gram.0, 1e-14, JACOBI_SWEEPS)?;
    Ok(eigen.min_value() >= -tol)
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Largest signed constraint violation of a candidate model: positive parts
/// of `|coords_i - coords_j| - D(i,j)` over edges and of
/// `D(i,j) - |coords_i - coords_j|` over non-edges, signed, so any value at
/// most zero certifies the model.
pub fn verify_model(
    inst: &ComparisonInstance,
    coords: &[Vec<f64>],
) -> Result<f64, FeasibilityError> {
    let n = inst.graph.vertex_count();
    if coords.len() != n {
        return Err(FeasibilityError::CoordArity {
            expected: n,
            got: coords.len(),
        });
    }
    if coords.iter().any(|c| c.len() != coords[0].len()) {
        return Err(FeasibilityError::CoordDims);
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let model = euclid(&coords[i], &coords[j]);
            let bound = inst.labeled_distance(i, j);
            let violation = if inst.graph.adjacent(i, j) {
                model - bound
            } else {
                bound - model
            };
            worst = worst.max(violation);
        }
    }
    Ok(worst)
}

/// One interval constraint on the squared distance of a vertex pair.
#[derive(Debug, Clone, Copy)]
struct Constraint {
    i: usize,
    j: usize,
    bound: f64,
    upper: bool,
}

impl Constraint {
    fn value(&self, g: &GramMatrix) -> f64 {
        g.squared_distance(self.i, self.j)
    }

    fn violation(&self, g: &GramMatrix) -> f64 {
        let v = self.value(g);
        if self.upper {
            (v - self.bound).max(0.0)
        } else {
            (self.bound - v).max(0.0)
        }
    }

    /// Orthogonal projection onto the halfspace, in the trace inner product.
    fn project(&self, g: &mut GramMatrix) {
        let v = self.value(g);
        let excess = if self.upper {
            v - self.bound
        } else {
            v - self.bound
        };
        if (self.upper && excess <= 0.0) || (!self.upper && excess >= 0.0) {
            return;
        }
        let m = &mut g.0;
        if self.i == 0 {
            // Functional G(j-1, j-1) with norm 1.
            let j = self.j - 1;
            m.set(j, j, m.get(j, j) - excess);
        } else {
            // Functional G(i,i) + G(j,j) - 2 G(i,j) with norm squared 4.
            let (a, b) = (self.i - 1, self.j - 1);
            let step = excess / 4.0;
            m.set(a, a, m.get(a, a) - step);
            m.set(b, b, m.get(b, b) - step);
            m.set(a, b, m.get(a, b) + step);
        }
    }
}

fn build_constraints(inst: &ComparisonInstance) -> Vec<Constraint> {
    let n = inst.graph.vertex_count();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = inst.labeled_distance(i, j);
            out.push(Constraint {
                i,
                j,
                bound: d * d,
                upper: inst.graph.adjacent(i, j),
            });
        }
    }
    out
}

/// Verdict of [`check_comparison`], together with the configuration that
/// produced it and the total projection cycles spent.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityVerdict {
    pub outcome: FeasibilityOutcome,
    pub iterations: u64,
    pub config: SolverConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityOutcome {
    /// A model exists; the coordinates re-verify within `tol`.
    Feasible {
        coords: Vec<Vec<f64>>,
        max_violation: f64,
    },
    /// The residual stabilized at or above the margin on every restart.
    Infeasible { gap: f64 },
    /// Neither certificate was reached within the iteration budget.
    Indeterminate { residual: f64 },
}

impl FeasibilityVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self.outcome, FeasibilityOutcome::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self.outcome, FeasibilityOutcome::Infeasible { .. })
    }
}

impl Serialize for FeasibilityVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.outcome {
            FeasibilityOutcome::Feasible {
                coords,
                max_violation,
            } => {
                let mut s = serializer.serialize_struct("FeasibilityVerdict", 4)?;
                s.serialize_field("verdict", "feasible")?;
                s.serialize_field("max_violation", max_violation)?;
                s.serialize_field("coords", coords)?;
                s.serialize_field("iterations", &self.iterations)?;
                s.end()
            }
            FeasibilityOutcome::Infeasible { gap } => {
                let mut s = serializer.serialize_struct("FeasibilityVerdict", 3)?;
                s.serialize_field("verdict", "infeasible")?;
                s.serialize_field("gap", gap)?;
                s.serialize_field("iterations", &self.iterations)?;
                s.end()
            }
            FeasibilityOutcome::Indeterminate { residual } => {
                let mut s = serializer.serialize_struct("FeasibilityVerdict", 3)?;
                s.serialize_field("verdict", "indeterminate")?;
                s.serialize_field("residual", residual)?;
                s.serialize_field("iterations", &self.iterations)?;
                s.end()
            }
        }
    }
}

/// How a single restart ended.
enum RestartEnd {
    Feasible { coords: Vec<Vec<f64>>, max_violation: f64 },
    Stalled { residual: f64 },
    Exhausted { residual: f64 },
}

struct Restart {
    end: RestartEnd,
    cycles: u64,
    /// Per-cycle residuals, kept for diagnostics and trend tests.
    #[allow(dead_code)]
    history: Vec<f64>,
}

fn residual_of(g: &GramMatrix, constraints: &[Constraint], eig_tol: f64) -> Result<f64, FeasibilityError> {
    let mut worst = 0.0f64;
    if g.0.dim() > 0 {
        let eigen = jacobi_eigen(&g.0, eig_tol, JACOBI_SWEEPS)?;
        worst = (-eigen.min_value()).max(0.0);
    }
    for c in constraints {
        worst = worst.max(c.violation(g));
    }
    Ok(worst)
}

fn try_embed(
    inst: &ComparisonInstance,
    g: &GramMatrix,
    cfg: &SolverConfig,
) -> Result<Option<(Vec<Vec<f64>>, f64)>, FeasibilityError> {
    let psd = GramMatrix(project_psd(&g.0, cfg.eig_tol)?);
    let coords = embed_gram(&psd, cfg.eig_tol)?;
    let violation = verify_model(inst, &coords)?;
    if violation <= cfg.tol {
        Ok(Some((coords, violation)))
    } else {
        Ok(None)
    }
}

fn stabilized(history: &[f64], scale: f64) -> bool {
    if history.len() < STABILITY_WINDOW {
        return false;
    }
    let window = &history[history.len() - STABILITY_WINDOW..];
    let max = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = window.iter().copied().fold(f64::INFINITY, f64::min);
    let last = *window.last().expect("window nonempty");
    max - min <= (1e-12 * scale).max(1e-6 * last)
}

fn run_restart(
    inst: &ComparisonInstance,
    constraints: &[Constraint],
    cfg: &SolverConfig,
    start: GramMatrix,
) -> Result<Restart, FeasibilityError> {
    let scale = constraints
        .iter()
        .map(|c| c.bound)
        .fold(1.0f64, f64::max);
    let mut x = start;
    let mut corrections: Vec<SymMatrix> =
        vec![SymMatrix::zeros(x.0.dim()); constraints.len() + 1];
    let mut history = Vec::new();
    for cycle in 1..=cfg.max_iter {
        let y = x.0.add(&corrections[0]);
        let projected = project_psd(&y, cfg.eig_tol)?;
        corrections[0] = y.sub(&projected);
        x = GramMatrix(projected);
        for (k, c) in constraints.iter().enumerate() {
            let y = x.0.add(&corrections[k + 1]);
            let mut moved = GramMatrix(y.clone());
            c.project(&mut moved);
            corrections[k + 1] = y.sub(&moved.0);
            x = moved;
        }
        let residual = residual_of(&x, constraints, cfg.eig_tol)?;
        history.push(residual);
        let speculative = residual <= 1e-8 * scale || cycle % EMBED_CHECK_PERIOD == 0;
        if speculative {
            if let Some((coords, max_violation)) = try_embed(inst, &x, cfg)? {
                return Ok(Restart {
                    end: RestartEnd::Feasible {
                        coords,
                        max_violation,
                    },
                    cycles: cycle,
                    history,
                });
            }
        }
        if residual >= cfg.infeas_margin && stabilized(&history, scale) {
            return Ok(Restart {
                end: RestartEnd::Stalled { residual },
                cycles: cycle,
                history,
            });
        }
    }
    let residual = *history.last().expect("max_iter is positive");
    if let Some((coords, max_violation)) = try_embed(inst, &x, cfg)? {
        return Ok(Restart {
            end: RestartEnd::Feasible {
                coords,
                max_violation,
            },
            cycles: cfg.max_iter,
            history,
        });
    }
    Ok(Restart {
        end: RestartEnd::Exhausted { residual },
        cycles: cfg.max_iter,
        history,
    })
}

fn warm_start(inst: &ComparisonInstance) -> Result<GramMatrix, FeasibilityError> {
    let n = inst.graph.vertex_count();
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = inst.labeled_distance(i, j);
            s[i * n + j] = d * d;
        }
    }
    GramMatrix::from_squared_distances(n, &s)
}

fn solve(
    inst: &ComparisonInstance,
    constraints: &[Constraint],
    cfg: &SolverConfig,
) -> Result<(FeasibilityVerdict, Vec<Restart>), FeasibilityError> {
    cfg.validate()?;
    let n = inst.graph.vertex_count();
    if n == 1 {
        return Ok((
            FeasibilityVerdict {
                outcome: FeasibilityOutcome::Feasible {
                    coords: vec![vec![]],
                    max_violation: 0.0,
                },
                iterations: 0,
                config: *cfg,
            },
            Vec::new(),
        ));
    }
    let warm = warm_start(inst)?;
    let scale = constraints.iter().map(|c| c.bound).fold(1.0f64, f64::max);
    let mut restarts = Vec::new();
    let mut iterations = 0u64;
    for r in 0..cfg.restarts {
        let start = if r == 0 {
            warm.clone()
        } else {
            // Deterministic perturbed restart.
            let mut rng =
                ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x9E37_79B9 * u64::from(r)));
            let unit = Uniform::new(-scale, scale);
            let mut g = warm.0.clone();
            for i in 0..g.dim() {
                for j in i..g.dim() {
                    let bump = unit.sample(&mut rng);
                    g.set(i, j, g.get(i, j) + bump);
                }
            }
            GramMatrix(g)
        };
        let restart = run_restart(inst, constraints, cfg, start)?;
        iterations += restart.cycles;
        if let RestartEnd::Feasible {
            coords,
            max_violation,
        } = &restart.end
        {
            return Ok((
                FeasibilityVerdict {
                    outcome: FeasibilityOutcome::Feasible {
                        coords: coords.clone(),
                        max_violation: *max_violation,
                    },
                    iterations,
                    config: *cfg,
                },
                restarts,
            ));
        }
        restarts.push(restart);
    }
    let all_stalled = restarts
        .iter()
        .all(|r| matches!(r.end, RestartEnd::Stalled { .. }));
    let min_residual = restarts
        .iter()
        .map(|r| match r.end {
            RestartEnd::Stalled { residual } | RestartEnd::Exhausted { residual } => residual,
            RestartEnd::Feasible { .. } => 0.0,
        })
        .fold(f64::INFINITY, f64::min);
    let outcome = if all_stalled && min_residual >= cfg.infeas_margin {
        FeasibilityOutcome::Infeasible { gap: min_residual }
    } else {
        FeasibilityOutcome::Indeterminate {
            residual: min_residual,
        }
    };
    Ok((
        FeasibilityVerdict {
            outcome,
            iterations,
            config: *cfg,
        },
        restarts,
    ))
}

/// Decides the comparison condition for one instance. Feasible verdicts are
/// self-certifying (the returned coordinates re-verify within `tol`);
/// infeasibility requires the residual to stabilize at or above the margin
/// on every restart.
pub fn check_comparison(
    inst: &ComparisonInstance,
    cfg: &SolverConfig,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    let constraints = build_constraints(inst);
    solve(inst, &constraints, cfg).map(|(verdict, _)| verdict)
}
