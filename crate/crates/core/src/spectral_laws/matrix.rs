use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Real symmetric matrix stored as a packed lower triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix<F> {
    dim: usize,
    data: Vec<F>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl<F: Real> SymmetricMatrix<F> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![F::zero(); dim * (dim + 1) / 2] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds the matrix from `f(i, j)` evaluated on the lower triangle `i >= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds from dense rows, rejecting non-square or asymmetric input.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return invalid("matrix rows must form a square");
        }
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > F::epsilon() * F::lit(16.0) * (a.abs() + b.abs()) {
                    return invalid(format!("matrix is not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        assert!(i < self.dim && j < self.dim);
        self.data[packed(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: F) {
        assert!(i < self.dim && j < self.dim);
        self.data[packed(i, j)] = value;
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn frobenius_norm(&self) -> F {
        let mut acc = F::zero();
        for i in 0..self.dim {
            for j in 0..=i {
                let v = self.get(i, j);
                acc += if i == j { v * v } else { F::lit(2.0) * v * v };
            }
        }
        acc.sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition<F> {
    /// Ascending eigenvalues.
    pub values: Vec<F>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<F>>,
}

impl<F: Real> EigenDecomposition<F> {
    /// `max_k |A v_k - lambda_k v_k|_2`.
    pub fn residual(&self, a: &SymmetricMatrix<F>) -> F {
        let n = a.dim();
        let mut worst = F::zero();
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            let mut acc = F::zero();
            for i in 0..n {
                let mut row = F::zero();
                for j in 0..n {
                    row += a.get(i, j) * v[j];
                }
                let r = row - *lambda * v[i];
                acc += r * r;
            }
            worst = worst.max(acc.sqrt());
        }
        worst
    }
}

/// Cyclic Jacobi eigensolver.
#[derive(Clone, Copy, Debug)]
pub struct JacobiSolver<F> {
    /// Absolute threshold on the off-diagonal Frobenius norm.
    pub tol: F,
    pub max_sweeps: usize,
    pub max_dim: usize,
}

impl<F: Real> JacobiSolver<F> {
    pub fn new(tol: F) -> Self {
        Self { tol, max_sweeps: 50, max_dim: 64 }
    }

    /// Tolerance `64 eps |A|_F`, near the floating-point floor for `a`.
    pub fn relative(a: &SymmetricMatrix<F>) -> Self {
        let scale = a.frobenius_norm().max(F::min_positive_value());
        Self::new(F::lit(64.0) * F::epsilon() * scale)
    }

    pub fn eigenvalues(&self, a: &SymmetricMatrix<F>) -> Result<Vec<F>> {
        self.run(a, false).map(|d| d.values)
    }

    pub fn decompose(&self, a: &SymmetricMatrix<F>) -> Result<EigenDecomposition<F>> {
        self.run(a, true)
    }

    fn run(&self, a: &SymmetricMatrix<F>, want_vectors: bool) -> Result<EigenDecomposition<F>> {
        let n = a.dim();
        if n > self.max_dim {
            return Err(Error::DimensionCap { dim: n, cap: self.max_dim });
        }
        if !(self.tol >= F::zero()) {
            return invalid("tolerance must be non-negative");
        }
        let mut m = a.to_dense();
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return invalid("matrix has non-finite entries");
        }
        let mut v: Vec<Vec<F>> = if want_vectors {
            (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
        } else {
            Vec::new()
        };

        let off_norm = |m: &Vec<Vec<F>>| {
            let mut acc = F::zero();
            for i in 0..n {
                for j in 0..i {
                    acc += m[i][j] * m[i][j];
                }
            }
            (F::lit(2.0) * acc).sqrt()
        };

        let mut sweeps = 0;
        loop {
            let off = off_norm(&m);
            if off <= self.tol {
                break;
            }
            if sweeps == self.max_sweeps {
                return Err(Error::NoConvergence { sweeps, off_norm: off.as_f64() });
            }
            sweeps += 1;
            for p in 0..n {
                for q in p + 1..n {
                    let apq = m[p][q];
                    if apq == F::zero() {
                        continue;
                    }
                    let theta = (m[q][q] - m[p][p]) / (F::lit(2.0) * apq);
                    let sign = if theta >= F::zero() { F::one() } else { -F::one() };
                    let t = sign / (theta.abs() + (theta * theta + F::one()).sqrt());
                    let c = F::one() / (t * t + F::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (m[k][p], m[k][q]);
                        m[k][p] = c * akp - s * akq;
                        m[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (m[p][k], m[q][k]);
                        m[p][k] = c * apk - s * aqk;
                        m[q][k] = s * apk + c * aqk;
                    }
                    m[p][q] = F::zero();
                    m[q][p] = F::zero();
                    if want_vectors {
                        for row in v.iter_mut() {
                            let (vp, vq) = (row[p], row[q]);
                            row[p] = c * vp - s * vq;
                            row[q] = s * vp + c * vq;
                        }
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).expect("finite eigenvalues"));
        let values = order.iter().map(|&i| m[i][i]).collect();
        let vectors = if want_vectors {
            order.iter().map(|&k| (0..n).map(|i| v[i][k]).collect()).collect()
        } else {
            Vec::new()
        };
        Ok(EigenDecomposition { values, vectors })
    }
}

/// Ascending eigenvalues by cyclic Jacobi, stopping once the off-diagonal
/// Frobenius norm is at most `tol` (at most 50 sweeps, dimension at most 64).
pub fn eigensolve_symmetric<F: Real>(a: &SymmetricMatrix<F>, tol: F) -> Result<Vec<F>> {
    JacobiSolver::new(tol).eigenvalues(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let a = SymmetricMatrix::from_rows(&[vec![2.0f64, 1.0], vec![1.0, 2.0]]).unwrap();
        let ev = eigensolve_symmetric(&a, 1e-14).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_needs_no_sweeps() {
        let a = SymmetricMatrix::from_fn(3, |i, j| if i == j { [3.0, -1.0, 2.0][i] } else { 0.0 });
        let solver = JacobiSolver { tol: 0.0, max_sweeps: 0, max_dim: 64 };
        assert_eq!(solver.eigenvalues(&a).unwrap(), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn sweep_budget_reported() {
        let a = SymmetricMatrix::from_fn(6, |i, j| 1.0 / (1 + i + j) as f64);
        let solver = JacobiSolver { tol: 0.0, max_sweeps: 1, max_dim: 64 };
        assert!(matches!(solver.eigenvalues(&a), Err(Error::NoConvergence { sweeps: 1, .. })));
    }

    #[test]
    fn dimension_cap() {
        let a = SymmetricMatrix::<f64>::identity(65);
        assert!(matches!(eigensolve_symmetric(&a, 1e-12), Err(Error::DimensionCap { dim: 65, cap: 64 })));
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
        assert!(SymmetricMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn eigenvectors_reconstruct() {
        let a = SymmetricMatrix::from_fn(5, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + if i == j { 1.5 } else { 0.0 });
        let d = JacobiSolver::relative(&a).decompose(&a).unwrap();
        assert!(d.residual(&a) < 1e-12 * a.frobenius_norm());
        let trace: f64 = (0..5).map(|i| a.get(i, i)).sum();
        assert!((d.values.iter().sum::<f64>() - trace).abs() < 1e-12);
    }
}
