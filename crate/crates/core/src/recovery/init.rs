use crate::channels::{quantize, ratio_weights, QuantizedData, QuantizedSignal};
use crate::error::{Error, Result};
use crate::numkit::ComplexVec;
use crate::rng::{self, Purpose};
use crate::sensing::{PairedSensing, Stacked};

use super::spectral::{one_bit_phase, subexp_phase, weighted_one_bit_phase, SpectralOptions};
use super::{InitKind, RecoveryReport};

/// Unit-norm complex Gaussian vector from stream `(seed, RandomInit, 0)`.
pub fn random_init(n: usize, seed: u64) -> Result<ComplexVec> {
    ComplexVec::new(rng::complex_gaussian_vec(n, &mut rng::stream(seed, Purpose::RandomInit, 0)))?.normalized()
}

/// Initial estimate of kind `kind` from paired observed intensities
/// `(b1_i, b2_i)`. Sub-exponential uses all `2m` intensities stacked; the
/// one-bit kinds quantize `sign(b1 − b2)` and (weighted) the ratios
/// `b/(b1 + b2)`.
pub fn initialize<S: PairedSensing + ?Sized>(
    kind: InitKind,
    sensing: &S,
    b1: &[f64],
    b2: &[f64],
    opts: &SpectralOptions,
) -> Result<RecoveryReport> {
    let m = sensing.pairs();
    for b in [b1, b2] {
        if b.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: b.len() });
        }
    }
    match kind {
        InitKind::Random => Ok(RecoveryReport {
            estimate: random_init(sensing.dim(), opts.seed)?,
            lambda_hat: None,
            iterations: 0,
            trace: Vec::new(),
            error_trace: Vec::new(),
            converged: true,
        }),
        InitKind::SubExp => {
            let stacked: Vec<f64> = b1.iter().chain(b2).copied().collect();
            subexp_phase(&Stacked(sensing), &stacked, opts)
        }
        InitKind::OneBit => {
            let y = b1.iter().zip(b2).map(|(&p, &q)| quantize(p, q)).collect();
            one_bit_phase(&QuantizedData::new(sensing, y, None)?, opts)
        }
        InitKind::WeightedOneBit => {
            let mut y = Vec::with_capacity(m);
            let mut w = Vec::with_capacity(m);
            for (&p, &q) in b1.iter().zip(b2) {
                match ratio_weights(p, q) {
                    Ok(r) => {
                        y.push(quantize(p, q));
                        w.push(r);
                    }
                    Err(_) => {
                        y.push(0);
                        w.push((0.5, 0.5));
                    }
                }
            }
            weighted_one_bit_phase(&QuantizedData::new(sensing, y, Some(w))?, opts)
        }
    }
}

/// Initial estimate of kind `kind` from an already quantized signal. Unlike
/// [`initialize`], the one-bit kinds use the labels and weights stored on
/// `signal.data`, so ties resolved at quantization time are kept.
pub fn initialize_quantized<S: PairedSensing + ?Sized>(
    kind: InitKind,
    signal: &QuantizedSignal<'_, S>,
    opts: &SpectralOptions,
) -> Result<RecoveryReport> {
    match kind {
        InitKind::OneBit => one_bit_phase(&signal.data, opts),
        InitKind::WeightedOneBit => weighted_one_bit_phase(&signal.data, opts),
        _ => initialize(kind, signal.data.sensing(), &signal.observed_first, &signal.observed_second, opts),
    }
}
