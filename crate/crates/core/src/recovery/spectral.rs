use num_complex::Complex64;

use crate::channels::QuantizedData;
use crate::error::{Error, Result};
use crate::numkit::{dot, power_iteration, PowerOptions, PowerOutcome};
use crate::sensing::{Arm, MeasurementOperator, PairedSensing};

use super::{RecoveryReport, TracePoint};

/// Spectral shift applied inside the power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftMode {
    /// Plain power method: converges to the largest-|eigenvalue| eigenvector.
    Off,
    /// Plain power method first; if the dominant eigenvalue is negative, rerun
    /// with `μ` equal to its magnitude (the spectral radius), so that the
    /// algebraically largest eigenvector wins.
    Auto,
    /// `μ = (1/m) Σ (‖a¹_i‖² + ‖a²_i‖²)`, an a-priori bound on the spectral
    /// radius of the one-bit matrices. Always correct but converges slowly.
    Bound,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub shift: ShiftMode,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iters: 10_000, seed: 0, shift: ShiftMode::Off }
    }
}

impl SpectralOptions {
    fn power(&self, shift: f64) -> PowerOptions {
        PowerOptions { tol: self.tol, max_iters: self.max_iters, seed: self.seed, shift }
    }
}

fn report(out: PowerOutcome) -> RecoveryReport {
    RecoveryReport {
        trace: out.steps.iter().enumerate().map(|(k, &value)| TracePoint { iteration: k + 1, value }).collect(),
        estimate: out.eigvec,
        lambda_hat: Some(out.eigval),
        iterations: out.iterations,
        error_trace: Vec::new(),
        converged: out.converged,
    }
}

fn check_dim(n: usize, r: &[Complex64]) -> Result<()> {
    if r.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: r.len() });
    }
    Ok(())
}

/// `(1/m) Σ_i (c¹_i a¹_i <a¹_i, r> − c²_i a²_i <a²_i, r>)` in `O(nm)`.
fn paired_matvec<S: PairedSensing + ?Sized>(sensing: &S, c1: &[f64], c2: &[f64], r: &[Complex64]) -> Vec<Complex64> {
    let m = sensing.pairs() as f64;
    let scaled = |arm: Arm, c: &[f64]| {
        let mut z = sensing.apply_arm(arm, r);
        for (zk, ck) in z.iter_mut().zip(c) {
            *zk *= *ck;
        }
        sensing.adjoint_arm(arm, &z)
    };
    let first = scaled(Arm::First, c1);
    let second = scaled(Arm::Second, c2);
    first.iter().zip(&second).map(|(a, b)| (a - b) / m).collect()
}

/// Action of `Ĉ_m = (1/m) Σ y_i (a¹_i a¹_i* − a²_i a²_i*)` on `r`, without
/// forming the matrix.
pub fn one_bit_matvec<S: PairedSensing + ?Sized>(data: &QuantizedData<'_, S>, r: &[Complex64]) -> Result<Vec<Complex64>> {
    let sensing = data.sensing();
    check_dim(sensing.dim(), r)?;
    let y: Vec<f64> = data.labels().iter().map(|&v| f64::from(v)).collect();
    Ok(paired_matvec(sensing, &y, &y, r))
}

/// Action of `(1/m) Σ y_i (R¹_i a¹_i a¹_i* − R²_i a²_i a²_i*)` on `r`.
pub fn weighted_one_bit_matvec<S: PairedSensing + ?Sized>(data: &QuantizedData<'_, S>, r: &[Complex64]) -> Result<Vec<Complex64>> {
    let sensing = data.sensing();
    check_dim(sensing.dim(), r)?;
    let weights = data.weights().ok_or(Error::MissingWeights)?;
    let (c1, c2): (Vec<f64>, Vec<f64>) =
        data.labels().iter().zip(weights).map(|(&y, &(r1, r2))| (f64::from(y) * r1, f64::from(y) * r2)).unzip();
    Ok(paired_matvec(sensing, &c1, &c2, r))
}

/// Power iteration honoring `opts.shift`; `bound` is the a-priori spectral
/// radius bound used by [`ShiftMode::Bound`].
fn top_eigenpair<F>(matvec: F, n: usize, opts: &SpectralOptions, bound: f64) -> Result<PowerOutcome>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    match opts.shift {
        ShiftMode::Off => power_iteration(matvec, n, &opts.power(0.0)),
        ShiftMode::Bound => power_iteration(matvec, n, &opts.power(bound)),
        ShiftMode::Fixed(mu) => power_iteration(matvec, n, &opts.power(mu)),
        ShiftMode::Auto => {
            let first = power_iteration(&matvec, n, &opts.power(0.0))?;
            let rayleigh = dot(&first.eigvec, &matvec(&first.eigvec)).re;
            if rayleigh >= 0.0 {
                return Ok(first);
            }
            power_iteration(matvec, n, &opts.power(-rayleigh))
        }
    }
}

/// One-bit spectral estimate: leading eigenvector of `Ĉ_m` by power iteration.
/// Only the labels are used; any ratio weights on `data` are ignored.
/// `lambda_hat` estimates `λ` (shift removed).
pub fn one_bit_phase<S: PairedSensing + ?Sized>(data: &QuantizedData<'_, S>, opts: &SpectralOptions) -> Result<RecoveryReport> {
    let sensing = data.sensing();
    let y: Vec<f64> = data.labels().iter().map(|&v| f64::from(v)).collect();
    let out = top_eigenpair(|r| paired_matvec(sensing, &y, &y, r), sensing.dim(), opts, sensing.mean_pair_energy())?;
    Ok(report(out))
}

/// Weighted one-bit spectral estimate; requires ratio weights on `data`.
pub fn weighted_one_bit_phase<S: PairedSensing + ?Sized>(data: &QuantizedData<'_, S>, opts: &SpectralOptions) -> Result<RecoveryReport> {
    let sensing = data.sensing();
    let weights = data.weights().ok_or(Error::MissingWeights)?;
    let (c1, c2): (Vec<f64>, Vec<f64>) =
        data.labels().iter().zip(weights).map(|(&y, &(r1, r2))| (f64::from(y) * r1, f64::from(y) * r2)).unzip();
    let out = top_eigenpair(|r| paired_matvec(sensing, &c1, &c2, r), sensing.dim(), opts, sensing.mean_pair_energy())?;
    Ok(report(out))
}

fn check_intensities(m: usize, b: &[f64]) -> Result<()> {
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: b.len() });
    }
    if let Some(i) = b.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("intensity b[{i}] = {} must be finite and >= 0", b[i])));
    }
    Ok(())
}

/// Action of `(1/m) Σ b_i a_i a_i*` on `r`.
pub fn subexp_matvec<O: MeasurementOperator + ?Sized>(op: &O, b: &[f64], r: &[Complex64]) -> Result<Vec<Complex64>> {
    check_intensities(op.rows(), b)?;
    check_dim(op.dim(), r)?;
    Ok(subexp_apply(op, b, r))
}

fn subexp_apply<O: MeasurementOperator + ?Sized>(op: &O, b: &[f64], r: &[Complex64]) -> Vec<Complex64> {
    let m = op.rows() as f64;
    let mut z = op.apply(r);
    for (zk, bk) in z.iter_mut().zip(b) {
        *zk *= bk / m;
    }
    op.adjoint(&z)
}

/// Sub-exponential spectral estimate: leading eigenvector of
/// `(1/m) Σ b_i a_i a_i*`. The matrix is PSD, so no shift is applied.
/// For unit `x0` and noiseless Gaussian data `lambda_hat → 2`.
pub fn subexp_phase<O: MeasurementOperator + ?Sized>(op: &O, b: &[f64], opts: &SpectralOptions) -> Result<RecoveryReport> {
    check_intensities(op.rows(), b)?;
    let out = power_iteration(|r| subexp_apply(op, b, r), op.dim(), &opts.power(0.0))?;
    Ok(report(out))
}
