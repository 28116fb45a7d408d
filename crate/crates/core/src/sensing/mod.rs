//! Random sensing ensembles and measurement operators.
//!
//! All operators follow the convention `(A x)_i = <a_i, x> = Σ_k conj(a_ik) x_k`,
//! so `A* y = Σ_i a_i y_i` and the rank-one action `(a_i a_i*) r` is
//! `a_i · (A r)_i`.

mod cdp;
mod ensemble;
mod operator;

pub use cdp::{cdp_adjoint, cdp_apply, cdp_intensities, CdpOperator, CdpPair};
pub use ensemble::{gaussian_row, intensity, DenseRows, EnsembleHeader, EnsembleKind, PairedEnsemble, PairedRows, PlainEnsemble};
pub use operator::{Arm, MeasurementOperator, PairedSensing, Stacked};

pub use crate::rng::{complex_gaussian, complex_gaussian_vec, sample_exponential, sample_poisson, stream, Purpose, StreamRng};

/// `|<a, x>|²` for every row of `op`.
pub fn intensities<O: MeasurementOperator + ?Sized>(op: &O, x: &[num_complex::Complex64]) -> Vec<f64> {
    op.apply(x).iter().map(|z| z.norm_sqr()).collect()
}
