use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

use super::model::{apply_model, MeasurementModel};
use super::quantize::compare_perturbed;

/// Samples per independent sub-stream in [`lambda_monte_carlo`].
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEstimate {
    pub estimate: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: usize,
}

/// Closed-form `λ` where one exists: 1 for the identity and
/// `(1 + 2√σ)/(1 + √σ)²` for exponential noise of variance `σ`.
pub fn lambda_closed_form(model: &MeasurementModel) -> Option<f64> {
    match *model {
        MeasurementModel::Identity => Some(1.0),
        MeasurementModel::ExponentialNoise { sigma } => {
            let s = sigma.sqrt();
            Some((1.0 + 2.0 * s) / ((1.0 + s) * (1.0 + s)))
        }
        _ => None,
    }
}

/// Monte-Carlo estimate of `λ = E[sign(θ(E₁) − θ(E₂))·(E₁ − E₂)]` over i.i.d.
/// `E₁, E₂ ~ Exp(1)`.
///
/// The sign uses the same comparison as [`super::quantize_signal`]; for the
/// Poisson model that is the sign of a difference of two conditional Poisson
/// counts (a Skellam draw), with zero differences counted as 0. Work is split
/// into chunks of `2^16` samples, each with its own stream, and combined in
/// chunk order, so the result does not depend on the thread count.
pub fn lambda_monte_carlo(model: &MeasurementModel, samples: usize, seed: u64) -> Result<LambdaEstimate> {
    model.validate()?;
    if samples < 1000 {
        return Err(Error::InvalidParameter(format!("lambda estimation needs >= 1000 samples, got {samples}")));
    }
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(samples - c * CHUNK);
            let mut s = rng::stream(seed, Purpose::Lambda, c as u64);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..count {
                let e1 = rng::sample_exponential(1.0, &mut s)?;
                let e2 = rng::sample_exponential(1.0, &mut s)?;
                let p1 = apply_model(model, e1, &mut s)?;
                let p2 = apply_model(model, e2, &mut s)?;
                let v = f64::from(compare_perturbed(model, e1, e2, p1, p2)) * (e1 - e2);
                sum += v;
                sum_sq += v * v;
            }
            Ok((sum, sum_sq))
        })
        .collect::<Result<_>>()?;

    let (sum, sum_sq) = partials.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(LambdaEstimate { estimate: mean, std_error: (var / n).sqrt(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(lambda_closed_form(&MeasurementModel::Identity), Some(1.0));
        assert_eq!(lambda_closed_form(&MeasurementModel::ExponentialNoise { sigma: 0.0 }), Some(1.0));
        assert_eq!(lambda_closed_form(&MeasurementModel::ExponentialNoise { sigma: 1.0 }), Some(0.75));
        assert_eq!(lambda_closed_form(&MeasurementModel::TanhDistortion { alpha: 1.0 }), None);
        assert_eq!(lambda_closed_form(&MeasurementModel::PoissonNoise { eta: 1.0 }), None);
    }

    #[test]
    fn closed_form_matches_laplace_integral() {
        // λ = E|L|(1 − e^{−γ|L|}) with |L| ~ Exp(1), γ = 1/√σ: numeric quadrature.
        for sigma in [0.25, 1.0, 4.0] {
            let gamma = 1.0 / f64::sqrt(sigma);
            let h = 1e-4;
            let integral: f64 = (0..400_000)
                .map(|k| {
                    let z = (k as f64 + 0.5) * h;
                    z * (1.0 - (-gamma * z).exp()) * (-z).exp() * h
                })
                .sum();
            let closed = lambda_closed_form(&MeasurementModel::ExponentialNoise { sigma }).unwrap();
            assert!((integral - closed).abs() < 1e-7, "sigma={sigma}: {integral} vs {closed}");
        }
    }

    #[test]
    fn identity_estimate() {
        let est = lambda_monte_carlo(&MeasurementModel::Identity, 1_000_000, 1).unwrap();
        assert!((est.estimate - 1.0).abs() <= 0.01, "{est:?}");
        assert!(est.std_error > 0.0 && est.std_error < 0.002);
    }

    #[test]
    fn exponential_noise_matches_closed_form() {
        let model = MeasurementModel::ExponentialNoise { sigma: 1.0 };
        let est = lambda_monte_carlo(&model, 1_000_000, 2).unwrap();
        assert!((est.estimate - 0.75).abs() <= 0.01, "{est:?}");
        assert!((est.estimate - 0.75).abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn poisson_decreases_in_eta() {
        let est: Vec<LambdaEstimate> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&eta| lambda_monte_carlo(&MeasurementModel::PoissonNoise { eta }, 200_000, 3).unwrap())
            .collect();
        for w in est.windows(2) {
            assert!(w[1].estimate < w[0].estimate - 2.0 * w[0].std_error.max(w[1].std_error), "{w:?}");
        }
        assert!(est.iter().all(|e| e.estimate > 0.0 && e.estimate <= 1.0));
    }

    #[test]
    fn deterministic_and_rejects_small_samples() {
        let a = lambda_monte_carlo(&MeasurementModel::PoissonNoise { eta: 1.0 }, 150_000, 9).unwrap();
        let b = lambda_monte_carlo(&MeasurementModel::PoissonNoise { eta: 1.0 }, 150_000, 9).unwrap();
        assert_eq!(a, b);
        assert!(lambda_monte_carlo(&MeasurementModel::Identity, 999, 0).is_err());
    }
}
