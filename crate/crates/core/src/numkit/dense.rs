use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::vector::ComplexVec;

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_ORACLE_DIM: usize = 512;

/// Small dense Hermitian matrix, row-major. Used for assembling `Ĉ` explicitly
/// in tests and as an eigen-oracle for the matrix-free solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianDense {
    n: usize,
    entries: Vec<Complex64>,
}

impl HermitianDense {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        for i in 0..n {
            for j in i..n {
                let deviation = (entries[i * n + j] - entries[j * n + i].conj()).norm();
                if deviation > HERMITIAN_TOL || !deviation.is_finite() {
                    return Err(Error::NotHermitian { i, j, deviation });
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![Complex64::new(0.0, 0.0); n * n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    /// `self += c · a a*`
    pub fn add_rank_one(&mut self, c: f64, a: &[Complex64]) {
        assert_eq!(a.len(), self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                self.entries[i * self.n + j] += c * a[i] * a[j].conj();
            }
        }
    }

    pub fn add_identity(&mut self, mu: f64) {
        for i in 0..self.n {
            self.entries[i * self.n + i] += mu;
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        self.entries.chunks(self.n).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Quadratic form `x* M x` (real for Hermitian `M`).
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        let mx = self.matvec(x);
        x.iter().zip(&mx).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

/// Algebraically largest eigenpair of a dense Hermitian matrix (`n ≤ 512`).
pub fn dense_top_eigenvector(m: &HermitianDense) -> Result<(f64, ComplexVec)> {
    let n = m.n;
    if n > MAX_ORACLE_DIM {
        return Err(Error::InvalidParameter(format!("dense eigen-oracle limited to n <= {MAX_ORACLE_DIM}, got {n}")));
    }
    // Symmetrize away rounding so the solver sees an exactly Hermitian matrix.
    let mat = DMatrix::from_fn(n, n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i).conj()));
    let eig = mat.symmetric_eigen();
    let (k, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("n > 0");
    let v: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
    Ok((lambda, ComplexVec::new(v)?.normalized()?))
}
