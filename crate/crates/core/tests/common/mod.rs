#![allow(dead_code)]

use onebit_core::channels::{quantize_signal, MeasurementModel, QuantizedSignal};
use onebit_core::numkit::ComplexVec;
use onebit_core::rng::{self, Purpose};
use onebit_core::sensing::PairedSensing;

/// Unit-norm complex Gaussian signal for trial `seed`.
pub fn unit_signal(n: usize, seed: u64) -> ComplexVec {
    let mut s = rng::stream(seed, Purpose::Signal, 0);
    ComplexVec::new(rng::complex_gaussian_vec(n, &mut s)).unwrap().normalized().unwrap()
}

pub fn measure<'a, S: PairedSensing + ?Sized>(
    sensing: &'a S,
    x0: &ComplexVec,
    model: &MeasurementModel,
    seed: u64,
    with_weights: bool,
) -> QuantizedSignal<'a, S> {
    let mut s = rng::stream(seed, Purpose::Perturbation, 0);
    quantize_signal(sensing, x0, model, &mut s, with_weights).unwrap()
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / k).abs().max((((i + 1) as f64) / k - f).abs())
        })
        .fold(0.0, f64::max)
}
