use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entries below this modulus are treated as zero by [`phase_op`].
const PHASE_FLOOR: f64 = 1e-300;

/// Dense complex vector with at least one entry and no NaN/Inf entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(Self(entries))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    /// Standard basis vector `e_k` of dimension `n`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidParameter(format!("basis index {k} out of range for dimension {n}")));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch { expected: re.len(), got: im.len() });
        }
        Self::new(re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.0).sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.0)
    }

    /// Unit-norm copy; fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let nrm = self.norm();
        if nrm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scaled(Complex64::new(1.0 / nrm, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }
}

impl Deref for ComplexVec {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl TryFrom<Vec<Complex64>> for ComplexVec {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// `Σ conj(a_k)·x_k`. Conjugate-linear in the first argument, so the rank-one
/// action `(a a*) r` is `a · inner(a, r)`.
pub fn inner(a: &ComplexVec, x: &ComplexVec) -> Result<Complex64> {
    check_dims(a.dim(), x.dim())?;
    Ok(dot(a, x))
}

pub(crate) fn dot(a: &[Complex64], x: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), x.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for (ak, xk) in a.iter().zip(x) {
        acc += ak.conj() * xk;
    }
    acc
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `y += c · x`
pub(crate) fn axpy(c: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yk, xk) in y.iter_mut().zip(x) {
        *yk += c * xk;
    }
}

pub(crate) fn phase_into(z: &[Complex64], out: &mut [Complex64]) {
    for (o, zk) in out.iter_mut().zip(z) {
        let r = zk.norm();
        *o = if r < PHASE_FLOOR { Complex64::new(1.0, 0.0) } else { zk / r };
    }
}

/// Entry-wise phase `z_k / |z_k|`; (numerically) zero entries map to `1`.
pub fn phase_op(z: &ComplexVec) -> ComplexVec {
    let mut out = vec![Complex64::new(0.0, 0.0); z.dim()];
    phase_into(z, &mut out);
    ComplexVec(out)
}

/// `1 − |<x/‖x‖, x0/‖x0‖>|²`, the phase- and scale-invariant recovery error in `[0, 1]`.
pub fn dist_sq(x: &ComplexVec, x0: &ComplexVec) -> Result<f64> {
    check_dims(x0.dim(), x.dim())?;
    let nx = x.norm_sqr();
    let n0 = x0.norm_sqr();
    if nx == 0.0 || n0 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let overlap = dot(x, x0).norm_sqr() / (nx * n0);
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

/// Removes the global phase of `x` relative to `x0`: returns `x·e^{−iφ}` with
/// `φ = arg <x0, x>`.
pub fn align_phase(x: &ComplexVec, x0: &ComplexVec) -> Result<ComplexVec> {
    let c = inner(x0, x)?;
    let r = c.norm();
    if r == 0.0 || r < 1e-14 * x.norm() * x0.norm() {
        return Err(Error::Orthogonal);
    }
    Ok(x.scaled(c.conj() / r))
}

/// `min_φ ‖x − e^{iφ} x0‖`.
pub fn phase_distance(x: &ComplexVec, x0: &ComplexVec) -> Result<f64> {
    let c = inner(x0, x)?;
    // ‖x‖² + ‖x0‖² − 2|<x0,x>| is the minimum over φ.
    let d2 = x.norm_sqr() + x0.norm_sqr() - 2.0 * c.norm();
    Ok(d2.max(0.0).sqrt())
}
