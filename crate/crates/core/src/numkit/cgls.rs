use num_complex::Complex64;

use crate::error::{Error, Result};

use super::vector::{norm_sqr, ComplexVec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CglsOptions {
    /// Relative normal-equation residual `‖A*(b − Ax)‖ / ‖A* b‖` at which to stop.
    pub tol: f64,
    /// `None` means `4·n`.
    pub max_iters: Option<usize>,
}

impl Default for CglsOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iters: None }
    }
}

#[derive(Debug, Clone)]
pub struct CglsOutcome {
    pub x: ComplexVec,
    pub iterations: usize,
    /// False when `max_iters` ran out before reaching `tol`; `x` is still the last iterate.
    pub converged: bool,
    pub relative_residual: f64,
}

/// Conjugate-gradient least squares: minimizes `‖A x − rhs‖₂` using only the
/// actions of `A` and `A*`. `x_init` warm-starts the iteration; the residual
/// `‖A x_k − rhs‖` is non-increasing in `k`.
pub fn cgls<A, AH>(
    apply_a: A,
    apply_adjoint: AH,
    rhs: &[Complex64],
    n: usize,
    x_init: Option<&[Complex64]>,
    opts: &CglsOptions,
) -> Result<CglsOutcome>
where
    A: Fn(&[Complex64]) -> Vec<Complex64>,
    AH: Fn(&[Complex64]) -> Vec<Complex64>,
{
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("cgls tol must be > 0, got {}", opts.tol)));
    }
    let max_iters = opts.max_iters.unwrap_or(4 * n);
    let zero = Complex64::new(0.0, 0.0);

    let mut x = match x_init {
        Some(x0) if x0.len() != n => return Err(Error::DimensionMismatch { expected: n, got: x0.len() }),
        Some(x0) => x0.to_vec(),
        None => vec![zero; n],
    };

    let reference = norm_sqr(&apply_adjoint(rhs)).sqrt();
    if reference == 0.0 {
        return Ok(CglsOutcome { x: ComplexVec::zeros(n)?, iterations: 0, converged: true, relative_residual: 0.0 });
    }

    let ax = apply_a(&x);
    if ax.len() != rhs.len() {
        return Err(Error::DimensionMismatch { expected: rhs.len(), got: ax.len() });
    }
    let mut r: Vec<Complex64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut s = apply_adjoint(&r);
    let mut p = s.clone();
    let mut gamma = norm_sqr(&s);
    let mut rel = gamma.sqrt() / reference;
    let mut iterations = 0;

    while rel > opts.tol && iterations < max_iters {
        let q = apply_a(&p);
        let delta = norm_sqr(&q);
        if delta == 0.0 {
            break;
        }
        let alpha = gamma / delta;
        for (xk, pk) in x.iter_mut().zip(&p) {
            *xk += alpha * pk;
        }
        for (rk, qk) in r.iter_mut().zip(&q) {
            *rk -= alpha * qk;
        }
        s = apply_adjoint(&r);
        let gamma_next = norm_sqr(&s);
        let beta = gamma_next / gamma;
        for (pk, sk) in p.iter_mut().zip(&s) {
            *pk = sk + beta * *pk;
        }
        gamma = gamma_next;
        rel = gamma.sqrt() / reference;
        iterations += 1;
        if !rel.is_finite() {
            return Err(Error::NumericalBreakdown);
        }
    }

    Ok(CglsOutcome { x: ComplexVec::new(x)?, iterations, converged: rel <= opts.tol, relative_residual: rel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::dot;
    use crate::rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dense(rows: &[Vec<Complex64>]) -> (impl Fn(&[Complex64]) -> Vec<Complex64> + '_, impl Fn(&[Complex64]) -> Vec<Complex64> + '_) {
        let apply = move |x: &[Complex64]| rows.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
        let adj = move |y: &[Complex64]| {
            let n = rows[0].len();
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (row, yi) in rows.iter().zip(y) {
                for (o, a) in out.iter_mut().zip(row) {
                    *o += a.conj() * yi;
                }
            }
            out
        };
        (apply, adj)
    }

    #[test]
    fn identity_returns_rhs() {
        let v = vec![Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.25), c(3.0)];
        let out = cgls(|x| x.to_vec(), |y| y.to_vec(), &v, 3, None, &CglsOptions::default()).unwrap();
        assert!(out.converged);
        for (a, b) in out.x.iter().zip(&v) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn overdetermined_real_system() {
        // Normal equations: [[3,0],[0,3]] x = [3,3] → x = (1,1).
        let rows = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)], vec![c(1.0), c(1.0)], vec![c(1.0), c(-1.0)]];
        let (a, ah) = dense(&rows);
        let rhs = [c(1.0), c(1.0), c(2.0), c(0.0)];
        let out = cgls(a, ah, &rhs, 2, None, &CglsOptions::default()).unwrap();
        assert!((out.x[0] - c(1.0)).norm() < 1e-12);
        assert!((out.x[1] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn adjoint_pair_is_consistent_and_square_system_is_solved_exactly() {
        let mut s = rng::stream(11, rng::Purpose::Test, 0);
        let n = 6;
        let rows: Vec<Vec<Complex64>> = (0..n).map(|_| rng::complex_gaussian_vec(n, &mut s)).collect();
        let (a, ah) = dense(&rows);
        let u = rng::complex_gaussian_vec(n, &mut s);
        let v = rng::complex_gaussian_vec(n, &mut s);
        let lhs = dot(&a(&u), &v);
        let rhs = dot(&u, &ah(&v));
        assert!((lhs - rhs).norm() <= 1e-10);

        let x_true = rng::complex_gaussian_vec(n, &mut s);
        let b = a(&x_true);
        let out = cgls(&a, &ah, &b, n, None, &CglsOptions { tol: 1e-13, max_iters: Some(200) }).unwrap();
        assert!(out.converged);
        for (p, q) in out.x.iter().zip(&x_true) {
            assert!((p - q).norm() < 1e-8, "{p} vs {q}");
        }
    }

    #[test]
    fn warm_start_and_budget_exhaustion() {
        let rows = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(100.0)], vec![c(1.0), c(1.0)]];
        let (a, ah) = dense(&rows);
        let rhs = [c(1.0), c(2.0), c(3.0)];
        let out = cgls(&a, &ah, &rhs, 2, None, &CglsOptions { tol: 1e-14, max_iters: Some(1) }).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, 1);
        let warm = cgls(&a, &ah, &rhs, 2, Some(&out.x), &CglsOptions::default()).unwrap();
        assert!(warm.converged);
        let err = cgls(&a, &ah, &rhs, 2, Some(&[c(1.0)]), &CglsOptions::default()).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, got: 1 });
    }
}
