use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

use super::vector::{norm_sqr, ComplexVec};

/// Number of fresh random starts tried after the first when an iterate collapses to zero.
const MAX_RESTARTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Stop once successive normalized iterates differ by at most this much.
    pub tol: f64,
    pub max_iters: usize,
    /// Seeds the random starting vector.
    pub seed: u64,
    /// Spectral shift `μ ≥ 0`: iterate with `M + μI`. Zero runs the plain method.
    pub shift: f64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iters: 10_000, seed: 0, shift: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct PowerOutcome {
    /// `‖M r‖` for the plain method; `‖(M + μI) r‖ − μ` when shifted.
    pub eigval: f64,
    pub eigvec: ComplexVec,
    pub iterations: usize,
    pub converged: bool,
    /// Step size `min(‖r_j − r_{j−1}‖, ‖r_j + r_{j−1}‖)` at every iteration.
    pub steps: Vec<f64>,
}

/// Matrix-free power iteration for a Hermitian operator.
///
/// `matvec` must be linear and Hermitian; only its action is used. Without a
/// shift the iteration converges to the eigenvector of largest |eigenvalue|,
/// which may be negative. Convergence is tested against both `r_{j−1}` and
/// `−r_{j−1}` so that sign-alternating iterates of a negative eigenvalue still
/// terminate.
pub fn power_iteration<F>(matvec: F, n: usize, opts: &PowerOptions) -> Result<PowerOutcome>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("power iteration tol must be > 0, got {}", opts.tol)));
    }
    if opts.max_iters == 0 {
        return Err(Error::InvalidParameter("power iteration needs max_iters >= 1".into()));
    }
    if !(opts.shift >= 0.0) || !opts.shift.is_finite() {
        return Err(Error::InvalidParameter(format!("spectral shift must be finite and >= 0, got {}", opts.shift)));
    }

    'attempt: for attempt in 0..=MAX_RESTARTS {
        let mut stream = rng::stream(opts.seed, Purpose::PowerInit, attempt as u64);
        let mut r = rng::complex_gaussian_vec(n, &mut stream);
        let r_norm = norm_sqr(&r).sqrt();
        if r_norm == 0.0 {
            continue;
        }
        r.iter_mut().for_each(|z| *z /= r_norm);

        let mut steps = Vec::new();
        let mut lambda = 0.0;
        let mut converged = false;
        for _ in 0..opts.max_iters {
            let mut w = matvec(&r);
            if w.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: w.len() });
            }
            if opts.shift != 0.0 {
                for (wk, rk) in w.iter_mut().zip(&r) {
                    *wk += opts.shift * rk;
                }
            }
            if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NumericalBreakdown);
            }
            lambda = norm_sqr(&w).sqrt();
            if lambda == 0.0 {
                continue 'attempt;
            }
            w.iter_mut().for_each(|z| *z /= lambda);

            let (mut minus, mut plus) = (0.0, 0.0);
            for (wk, rk) in w.iter().zip(&r) {
                minus += (wk - rk).norm_sqr();
                plus += (wk + rk).norm_sqr();
            }
            let step = minus.min(plus).sqrt();
            steps.push(step);
            r = w;
            if step <= opts.tol {
                converged = true;
                break;
            }
        }
        return Ok(PowerOutcome {
            eigval: lambda - opts.shift,
            eigvec: ComplexVec::new(r)?,
            iterations: steps.len(),
            converged,
            steps,
        });
    }
    Err(Error::PowerIterationCollapsed { attempts: MAX_RESTARTS + 1 })
}
