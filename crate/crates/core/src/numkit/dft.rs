use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::vector::ComplexVec;

/// Unitary DFT of a fixed length (`1/√n` on both directions), so the adjoint
/// is the inverse.
#[derive(Clone)]
pub struct Dft {
    n: usize,
    scale: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Dft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dft").field("n", &self.n).finish()
    }
}

impl Dft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            scale: 1.0 / (n as f64).sqrt(),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `buf ← F buf`, `(F x)_k = n^{-1/2} Σ_j x_j e^{−2πi jk/n}`.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "dft length mismatch");
        self.forward.process(buf);
        buf.iter_mut().for_each(|z| *z *= self.scale);
    }

    /// `buf ← F* buf`.
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "dft length mismatch");
        self.inverse.process(buf);
        buf.iter_mut().for_each(|z| *z *= self.scale);
    }
}

pub fn dft(x: &ComplexVec) -> ComplexVec {
    let mut buf = x.to_vec();
    Dft::new(buf.len()).forward_in_place(&mut buf);
    ComplexVec::new(buf).expect("unitary DFT of a finite vector is finite")
}

pub fn idft(y: &ComplexVec) -> ComplexVec {
    let mut buf = y.to_vec();
    Dft::new(buf.len()).inverse_in_place(&mut buf);
    ComplexVec::new(buf).expect("unitary DFT of a finite vector is finite")
}
