use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{cgls, dist_sq, phase_into, CglsOptions, ComplexVec};
use crate::sensing::MeasurementOperator;

use super::{RecoveryReport, TracePoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltMinOptions {
    pub max_iters: usize,
    /// Stop once the relative objective decrease falls to this level.
    pub tol: f64,
    pub cgls: CglsOptions,
}

impl Default for AltMinOptions {
    fn default() -> Self {
        Self { max_iters: 200, tol: 1e-12, cgls: CglsOptions::default() }
    }
}

/// `Σ (|(Ax)_i| − √b_i)²`, i.e. `‖Ax − B·Ph(Ax)‖²` with `B = Diag(√b)`.
pub fn mse<O: MeasurementOperator + ?Sized>(op: &O, b: &[f64], x: &[Complex64]) -> Result<f64> {
    check_inputs(op, b, x)?;
    Ok(objective(&op.apply(x), b))
}

fn objective(z: &[Complex64], b: &[f64]) -> f64 {
    let sqrt_b: Vec<f64> = b.iter().map(|v| v.sqrt()).collect();
    amplitude_misfit(z, &sqrt_b)
}

fn check_inputs<O: MeasurementOperator + ?Sized>(op: &O, b: &[f64], x: &[Complex64]) -> Result<()> {
    if b.len() != op.rows() {
        return Err(Error::DimensionMismatch { expected: op.rows(), got: b.len() });
    }
    if x.len() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: x.len() });
    }
    if let Some(i) = b.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("intensity b[{i}] = {} must be finite and >= 0", b[i])));
    }
    Ok(())
}

/// One phase + least-squares step on `op` with intensities `b = sqrt_b²`,
/// warm-started at `x` whose image is `z = A x`. Returns the new point and its
/// image. An inexact least-squares solve could in principle raise the
/// objective; such a step is rejected and `x` is returned unchanged.
pub(crate) fn altmin_step<O: MeasurementOperator + ?Sized>(
    op: &O,
    sqrt_b: &[f64],
    x: &[Complex64],
    z: &[Complex64],
    cgls_opts: &CglsOptions,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let mut rhs = vec![Complex64::new(0.0, 0.0); z.len()];
    phase_into(z, &mut rhs);
    for (r, s) in rhs.iter_mut().zip(sqrt_b) {
        *r *= *s;
    }
    let ls = cgls(|v| op.apply(v), |v| op.adjoint(v), &rhs, op.dim(), Some(x), cgls_opts)?;
    let z_new = op.apply(&ls.x);
    if amplitude_misfit(&z_new, sqrt_b) <= amplitude_misfit(z, sqrt_b) {
        Ok((ls.x.into_vec(), z_new))
    } else {
        Ok((x.to_vec(), z.to_vec()))
    }
}

fn amplitude_misfit(z: &[Complex64], sqrt_b: &[f64]) -> f64 {
    z.iter().zip(sqrt_b).map(|(zk, s)| (zk.norm() - s).powi(2)).sum()
}

/// Alternating minimization of `‖Ax − Bu‖²` subject to `|u_i| = 1`:
/// `u ← Ph(Ax)`, then `x ← argmin ‖Ax − Bu‖²` by CGLS warm-started at the
/// current `x`. Each half-step is a minimizer, so the objective trace is
/// non-increasing.
///
/// `trace[k]` holds the objective after `k` iterations. With `reference`,
/// `error_trace[k]` holds `dist_sq(x_k, reference)`. A CGLS breakdown ends the
/// run with `converged = false`.
pub fn alt_min<O: MeasurementOperator + ?Sized>(
    op: &O,
    b: &[f64],
    x_init: &ComplexVec,
    opts: &AltMinOptions,
    reference: Option<&ComplexVec>,
) -> Result<RecoveryReport> {
    check_inputs(op, b, x_init)?;
    if x_init.norm_sqr() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let sqrt_b: Vec<f64> = b.iter().map(|v| v.sqrt()).collect();
    let mut x = x_init.to_vec();
    let mut z = op.apply(&x);
    let mut obj = objective(&z, b);
    let mut trace = vec![TracePoint { iteration: 0, value: obj }];
    let mut error_trace = Vec::new();
    let mut record_error = |k: usize, x: &[Complex64]| -> Result<()> {
        if let Some(x0) = reference {
            error_trace.push(TracePoint { iteration: k, value: dist_sq(&ComplexVec::new(x.to_vec())?, x0)? });
        }
        Ok(())
    };
    record_error(0, &x)?;

    let mut converged = obj == 0.0;
    let mut iterations = 0;
    while !converged && iterations < opts.max_iters {
        let (x_next, z_next) = match altmin_step(op, &sqrt_b, &x, &z, &opts.cgls) {
            Ok(step) => step,
            Err(_) => break,
        };
        x = x_next;
        z = z_next;
        iterations += 1;
        let next = amplitude_misfit(&z, &sqrt_b);
        trace.push(TracePoint { iteration: iterations, value: next });
        record_error(iterations, &x)?;
        converged = next == 0.0 || obj - next <= opts.tol * obj;
        obj = next;
    }

    Ok(RecoveryReport {
        estimate: ComplexVec::new(x)?,
        lambda_hat: None,
        iterations,
        trace,
        error_trace,
        converged,
    })
}
