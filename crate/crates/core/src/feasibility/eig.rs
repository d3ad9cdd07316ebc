//! Dense symmetric matrices and eigendecomposition by cyclic Jacobi
//! rotations. Dimensions here stay tiny, so robustness wins over speed.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EigenError {
    #[error("Jacobi sweeps did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix data of {0} entries does not form a square matrix")]
    NotSquare(usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
}

/// A dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, a: vec![0.0; n * n] }
    }

    pub fn from_vec(n: usize, a: Vec<f64>) -> Result<Self, EigenError> {
        if a.len() != n * n {
            return Err(EigenError::NotSquare(a.len()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if a[i * n + j] != a[j * n + i] {
                    return Err(EigenError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix { n, a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.a[i * self.n + j] = value;
        self.a[j * self.n + i] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.a
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let x = self.get(i, j);
                sum += 2.0 * x * x;
            }
        }
        sum.sqrt()
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        debug_assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        debug_assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x - y).collect(),
        }
    }
}

/// Eigendecomposition of a symmetric matrix: `values[k]` pairs with the
/// column `k` of `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    vectors: Vec<f64>,
    n: usize,
}

impl Eigen {
    /// Component `i` of eigenvector `k`.
    pub fn vector_component(&self, i: usize, k: usize) -> f64 {
        self.vectors[i * self.n + k]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Rebuilds `sum_k values[k] v_k v_k^T` with the given per-eigenvalue
    /// transform applied.
    pub fn recompose(&self, map: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.n;
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut sum = 0.0;
                for k in 0..n {
                    sum += map(self.values[k])
                        * self.vector_component(i, k)
                        * self.vector_component(j, k);
                }
                out.set(i, j, sum);
            }
        }
        out
    }
}

/// Cyclic Jacobi eigendecomposition. Sweeps rotate away every off-diagonal
/// entry in turn until the off-diagonal norm drops below `tol` relative to
/// the matrix scale; errors after `max_sweeps` sweeps.
pub fn jacobi_eigen(m: &SymMatrix, tol: f64, max_sweeps: usize) -> Result<Eigen, EigenError> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n <= 1 {
        return Ok(Eigen {
            values: (0..n).map(|i| a.get(i, i)).collect(),
            vectors: v,
            n,
        });
    }
    let threshold = tol * a.frobenius_norm().max(1.0);
    for _ in 0..max_sweeps {
        if a.off_diagonal_norm() <= threshold {
            return Ok(Eigen {
                values: (0..n).map(|i| a.get(i, i)).collect(),
                vectors: v,
                n,
            });
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let alpha = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if alpha == 0.0 {
                    1.0
                } else {
                    alpha.signum() / (alpha.abs() + (1.0 + alpha * alpha).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if a.off_diagonal_norm() <= threshold {
        return Ok(Eigen {
            values: (0..n).map(|i| a.get(i, i)).collect(),
            vectors: v,
            n,
        });
    }
    Err(EigenError::NoConvergence(max_sweeps))
}
