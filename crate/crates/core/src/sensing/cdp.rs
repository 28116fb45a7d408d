use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{ComplexVec, Dft};
use crate::rng::Purpose;

use super::ensemble::gaussian_row;
use super::operator::{Arm, MeasurementOperator, PairedSensing};

/// Coded-diffraction operator: `r` stacked blocks `x ↦ F·Diag(w_i)·x` with a
/// unitary DFT `F` and masks `w_i`. Output length is `r·n`.
#[derive(Debug, Clone)]
pub struct CdpOperator {
    n: usize,
    masks: Vec<ComplexVec>,
    seed: u64,
    dft: Dft,
}

impl CdpOperator {
    /// `r` i.i.d. `CN(0, I_n)` masks.
    pub fn new(n: usize, r: usize, seed: u64) -> Result<Self> {
        Self::gaussian(n, r, seed, Purpose::PlainMasks)
    }

    fn gaussian(n: usize, r: usize, seed: u64, purpose: Purpose) -> Result<Self> {
        if n == 0 || r == 0 {
            return Err(Error::InvalidParameter(format!("cdp needs n >= 1 and r >= 1, got n={n}, r={r}")));
        }
        let masks = (0..r).map(|i| ComplexVec::new(gaussian_row(seed, purpose, i, n))).collect::<Result<Vec<_>>>()?;
        let mut op = Self::from_masks(masks)?;
        op.seed = seed;
        Ok(op)
    }

    pub fn from_masks(masks: Vec<ComplexVec>) -> Result<Self> {
        let n = masks.first().ok_or_else(|| Error::InvalidParameter("cdp needs at least one mask".into()))?.dim();
        if let Some(bad) = masks.iter().find(|w| w.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.dim() });
        }
        Ok(Self { n, masks, seed: 0, dft: Dft::new(n) })
    }

    pub fn masks(&self) -> &[ComplexVec] {
        &self.masks
    }

    pub fn num_masks(&self) -> usize {
        self.masks.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn energy(&self) -> f64 {
        self.masks.iter().map(|w| w.norm_sqr()).sum()
    }
}

impl MeasurementOperator for CdpOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn rows(&self) -> usize {
        self.n * self.masks.len()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "cdp input dimension mismatch");
        let mut out = Vec::with_capacity(self.rows());
        for w in &self.masks {
            let start = out.len();
            out.extend(w.iter().zip(x).map(|(wk, xk)| wk * xk));
            self.dft.forward_in_place(&mut out[start..]);
        }
        out
    }

    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(y.len(), self.rows(), "cdp adjoint length mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n];
        for (w, block) in self.masks.iter().zip(y.chunks_exact(self.n)) {
            buf.copy_from_slice(block);
            self.dft.inverse_in_place(&mut buf);
            for ((o, wk), bk) in out.iter_mut().zip(w.iter()).zip(&buf) {
                *o += wk.conj() * bk;
            }
        }
        out
    }
}

/// Linear part of the coded-diffraction measurement, length `r·n`.
pub fn cdp_apply(op: &CdpOperator, x: &ComplexVec) -> Result<ComplexVec> {
    if x.dim() != op.n {
        return Err(Error::DimensionMismatch { expected: op.n, got: x.dim() });
    }
    ComplexVec::new(op.apply(x))
}

/// `Σ_i conj(w_i) ⊙ F*(y_i)`.
pub fn cdp_adjoint(op: &CdpOperator, y: &[Complex64]) -> Result<ComplexVec> {
    if y.len() != op.rows() {
        return Err(Error::DimensionMismatch { expected: op.rows(), got: y.len() });
    }
    ComplexVec::new(op.adjoint(y))
}

/// `|F·Diag(w_i)·x|²` for every block, concatenated.
pub fn cdp_intensities(op: &CdpOperator, x: &ComplexVec) -> Result<Vec<f64>> {
    Ok(cdp_apply(op, x)?.iter().map(|z| z.norm_sqr()).collect())
}

/// Paired coded-diffraction sensing for one-bit measurements: mask pair
/// `(w¹_i, w²_i)` yields `n` pairs by matching coordinate `k` of
/// `F·Diag(w¹_i)·x` with coordinate `k` of `F·Diag(w²_i)·x`. `r` mask pairs give
/// `m = r·n` pairs.
#[derive(Debug, Clone)]
pub struct CdpPair {
    first: CdpOperator,
    second: CdpOperator,
}

impl CdpPair {
    pub fn new(n: usize, r: usize, seed: u64) -> Result<Self> {
        Ok(Self {
            first: CdpOperator::gaussian(n, r, seed, Purpose::FirstMasks)?,
            second: CdpOperator::gaussian(n, r, seed, Purpose::SecondMasks)?,
        })
    }

    pub fn from_operators(first: CdpOperator, second: CdpOperator) -> Result<Self> {
        if first.n != second.n || first.num_masks() != second.num_masks() {
            return Err(Error::InvalidParameter("cdp arms must share dimension and mask count".into()));
        }
        Ok(Self { first, second })
    }

    pub fn arm(&self, arm: Arm) -> &CdpOperator {
        match arm {
            Arm::First => &self.first,
            Arm::Second => &self.second,
        }
    }
}

impl PairedSensing for CdpPair {
    fn dim(&self) -> usize {
        self.first.n
    }
    fn pairs(&self) -> usize {
        self.first.rows()
    }
    fn apply_arm(&self, arm: Arm, x: &[Complex64]) -> Vec<Complex64> {
        self.arm(arm).apply(x)
    }
    fn adjoint_arm(&self, arm: Arm, y: &[Complex64]) -> Vec<Complex64> {
        self.arm(arm).adjoint(y)
    }
    fn mean_pair_energy(&self) -> f64 {
        // Each row of block i has squared norm ‖w_i‖²/n and the block has n rows.
        (self.first.energy() + self.second.energy()) / self.pairs() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::dot;
    use crate::rng;
    use std::f64::consts::PI;

    fn ones(n: usize) -> ComplexVec {
        ComplexVec::new(vec![Complex64::new(1.0, 0.0); n]).unwrap()
    }

    #[test]
    fn flat_spectrum_for_impulse() {
        let op = CdpOperator::from_masks(vec![ones(4), ones(4)]).unwrap();
        let b = cdp_intensities(&op, &ComplexVec::basis(4, 0).unwrap()).unwrap();
        assert_eq!(b.len(), 8);
        for v in b {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn adjoint_identity() {
        let op = CdpOperator::new(16, 3, 4).unwrap();
        let mut s = rng::stream(4, Purpose::Test, 0);
        let u = rng::complex_gaussian_vec(16, &mut s);
        let v = rng::complex_gaussian_vec(48, &mut s);
        assert!((dot(&op.apply(&u), &v) - dot(&u, &op.adjoint(&v))).norm() <= 1e-10);
    }

    #[test]
    fn single_all_ones_mask_round_trips() {
        let op = CdpOperator::from_masks(vec![ones(8)]).unwrap();
        let x = ComplexVec::new(rng::complex_gaussian_vec(8, &mut rng::stream(1, Purpose::Test, 0))).unwrap();
        let back = cdp_adjoint(&op, &cdp_apply(&op, &x).unwrap()).unwrap();
        assert!(back.sub(&x).unwrap().norm() < 1e-12);
    }

    #[test]
    fn two_identical_masks_compose_to_twice_modulus_weighting() {
        // Explicit n = 4 computation: build F·Diag(w) as a dense matrix and form
        // Σ_blocks (F·Diag(w))*(F·Diag(w)) x by brute force.
        let n = 4;
        let w = ComplexVec::new(vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 1.5),
            Complex64::new(2.0, -1.0),
        ])
        .unwrap();
        let x = ComplexVec::new(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-1.0, 0.4),
            Complex64::new(0.0, -0.7),
            Complex64::new(0.9, 0.0),
        ])
        .unwrap();
        let op = CdpOperator::from_masks(vec![w.clone(), w.clone()]).unwrap();
        let composed = cdp_adjoint(&op, &cdp_apply(&op, &x).unwrap()).unwrap();

        let f = |k: usize, j: usize| Complex64::from_polar(0.5, -2.0 * PI * (j * k) as f64 / n as f64);
        let block = |xv: &[Complex64]| -> Vec<Complex64> { (0..n).map(|k| (0..n).map(|j| f(k, j) * w[j] * xv[j]).sum()).collect() };
        let block_adj = |yv: &[Complex64]| -> Vec<Complex64> { (0..n).map(|j| (0..n).map(|k| (f(k, j) * w[j]).conj() * yv[k]).sum()).collect() };
        let once = block_adj(&block(&x));
        for j in 0..n {
            let brute = 2.0 * once[j];
            let pattern = 2.0 * w[j].norm_sqr() * x[j];
            assert!((composed[j] - brute).norm() < 1e-12);
            assert!((composed[j] - pattern).norm() < 1e-12);
        }
    }

    #[test]
    fn unimodular_masks_preserve_energy_per_block() {
        let n = 32;
        let mut s = rng::stream(9, Purpose::Test, 0);
        let masks: Vec<ComplexVec> = (0..3)
            .map(|_| ComplexVec::new((0..n).map(|_| Complex64::from_polar(1.0, 2.0 * PI * rand::Rng::random::<f64>(&mut s))).collect()).unwrap())
            .collect();
        let op = CdpOperator::from_masks(masks).unwrap();
        let x = ComplexVec::new(rng::complex_gaussian_vec(n, &mut s)).unwrap();
        let total: f64 = cdp_intensities(&op, &x).unwrap().iter().sum();
        assert!((total - 3.0 * x.norm_sqr()).abs() < 1e-10 * total);
    }

    #[test]
    fn length_checks() {
        let op = CdpOperator::new(4, 2, 1).unwrap();
        assert!(cdp_apply(&op, &ComplexVec::zeros(3).unwrap()).is_err());
        assert!(cdp_adjoint(&op, &[Complex64::new(0.0, 0.0); 4]).is_err());
        assert!(CdpOperator::new(0, 2, 1).is_err());
    }

    #[test]
    fn pair_energy_matches_row_norms() {
        let pair = CdpPair::new(8, 2, 3).unwrap();
        // brute force: row (i,k) of arm j is conj(F_k ⊙ w_i), norm² ‖w_i‖²/n
        let mut total = 0.0;
        for arm in [Arm::First, Arm::Second] {
            for k in 0..pair.pairs() {
                let mut e = vec![Complex64::new(0.0, 0.0); pair.pairs()];
                e[k] = Complex64::new(1.0, 0.0);
                total += crate::numkit::norm_sqr(&pair.adjoint_arm(arm, &e));
            }
        }
        assert!((total / pair.pairs() as f64 - pair.mean_pair_energy()).abs() < 1e-12);
    }
}
