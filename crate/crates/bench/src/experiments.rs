use num_complex::Complex64;
use onebit_core::channels::{lambda_closed_form, lambda_monte_carlo, quantize_signal, MeasurementModel, QuantizedSignal};
use onebit_core::numkit::{dist_sq, ComplexVec};
use onebit_core::recovery::{
    alt_min, alt_min_resampled, initialize_quantized, multi_init_select, one_bit_phase, subexp_phase, AltMinOptions,
    InitKind, RecoveryReport, ResamplingData, ResamplingOptions, ShiftMode, SpectralOptions,
};
use onebit_core::rng::{self, Purpose};
use onebit_core::sensing::{CdpPair, PairedEnsemble, PairedSensing, Stacked};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, Refine};
use crate::error::{at, BenchResult, Stage};
use crate::stats::{iqr, median};

/// Seed of trial `t`; every random draw of the trial derives from it.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    rng::derive_seed(seed, Purpose::Trial, t as u64)
}

/// Complex Gaussian signal rescaled to `‖x0‖² = energy`.
pub fn signal(n: usize, energy: f64, seed: u64) -> BenchResult<ComplexVec> {
    let mut s = rng::stream(seed, Purpose::Signal, 0);
    let x = ComplexVec::new(rng::complex_gaussian_vec(n, &mut s)).map_err(at(Stage::Sensing))?;
    let unit = x.normalized().map_err(at(Stage::Sensing))?;
    Ok(unit.scaled(Complex64::new(energy.sqrt(), 0.0)))
}

pub fn spectral_options(config: &ExperimentConfig, seed: u64) -> SpectralOptions {
    SpectralOptions {
        tol: config.tol,
        max_iters: 10_000,
        seed,
        shift: if config.shift { ShiftMode::Auto } else { ShiftMode::Off },
    }
}

fn measure<'a, S: PairedSensing + ?Sized>(
    sensing: &'a S,
    x0: &ComplexVec,
    model: &MeasurementModel,
    seed: u64,
    with_weights: bool,
) -> BenchResult<QuantizedSignal<'a, S>> {
    let mut s = rng::stream(seed, Purpose::Perturbation, 0);
    quantize_signal(sensing, x0, model, &mut s, with_weights).map_err(at(Stage::Quantize))
}

fn stacked_intensities<S: ?Sized>(q: &QuantizedSignal<'_, S>) -> Vec<f64> {
    q.observed_first.iter().chain(&q.observed_second).copied().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaRow {
    pub model: String,
    pub param: Option<f64>,
    pub lambda_estimate: f64,
    pub std_error: f64,
    pub closed_form: Option<f64>,
}

pub fn lambda_sweep(config: &ExperimentConfig) -> BenchResult<Vec<LambdaRow>> {
    config
        .models
        .iter()
        .enumerate()
        .map(|(k, model)| {
            let est = lambda_monte_carlo(model, config.samples, rng::derive_seed(config.seed, Purpose::Lambda, k as u64))
                .map_err(at(Stage::Lambda))?;
            Ok(LambdaRow {
                model: model.family().into(),
                param: model.parameter(),
                lambda_estimate: est.estimate,
                std_error: est.std_error,
                closed_form: lambda_closed_form(model),
            })
        })
        .collect()
}

/// One trial at one distortion level.
#[derive(Debug, Clone)]
pub struct DistortionOutcome {
    pub alpha: f64,
    pub one_bit: ComplexVec,
    pub one_bit_dist_sq: f64,
    pub subexp_dist_sq: f64,
}

/// Per trial, the outcomes at every `alpha`. Each trial draws one ensemble and
/// signal and reuses them across the whole grid.
pub fn distortion_trials(config: &ExperimentConfig) -> BenchResult<Vec<Vec<DistortionOutcome>>> {
    (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let ts = trial_seed(config.seed, t);
            let ens = PairedEnsemble::new(config.n, config.m, ts).map_err(at(Stage::Sensing))?;
            let x0 = signal(config.n, 1.0, ts)?;
            let opts = spectral_options(config, ts);
            config
                .alphas
                .iter()
                .map(|&alpha| {
                    let q = measure(&ens, &x0, &MeasurementModel::TanhDistortion { alpha }, ts, false)?;
                    let one = one_bit_phase(&q.data, &opts).map_err(at(Stage::Init))?;
                    let sub = subexp_phase(&Stacked(&ens), &stacked_intensities(&q), &opts).map_err(at(Stage::Init))?;
                    Ok(DistortionOutcome {
                        alpha,
                        one_bit_dist_sq: dist_sq(&one.estimate, &x0).map_err(at(Stage::Init))?,
                        subexp_dist_sq: dist_sq(&sub.estimate, &x0).map_err(at(Stage::Init))?,
                        one_bit: one.estimate,
                    })
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionRow {
    pub alpha: f64,
    pub method: &'static str,
    pub median_dist_sq: f64,
    pub iqr: f64,
    pub trials: usize,
}

pub fn distortion_rows(config: &ExperimentConfig, trials: &[Vec<DistortionOutcome>]) -> Vec<DistortionRow> {
    let mut rows = Vec::with_capacity(2 * config.alphas.len());
    for (k, &alpha) in config.alphas.iter().enumerate() {
        let methods: [(&'static str, fn(&DistortionOutcome) -> f64); 2] =
            [("1bitPhase", |o| o.one_bit_dist_sq), ("SubExpPhase", |o| o.subexp_dist_sq)];
        for (method, pick) in methods {
            let values: Vec<f64> = trials.iter().map(|t| pick(&t[k])).collect();
            rows.push(DistortionRow { alpha, method, median_dist_sq: median(&values), iqr: iqr(&values), trials: values.len() });
        }
    }
    rows
}

/// Error trace `dist_sq(x_k, x0)` of every init kind in one trial, indexed by
/// AltMin iteration `0..=max_iters`. Runs that stop early are held at their
/// last value.
#[derive(Debug, Clone)]
pub struct ConvergenceTrial {
    pub traces: Vec<(InitKind, Vec<f64>)>,
    /// Objective `‖Ax − Bu‖²` per performed iteration, per init.
    pub objectives: Vec<(InitKind, Vec<f64>)>,
}

fn run_inits<S: PairedSensing + ?Sized>(
    config: &ExperimentConfig,
    sensing: &S,
    x0: &ComplexVec,
    ts: u64,
) -> BenchResult<ConvergenceTrial> {
    let weights = config.inits.contains(&InitKind::WeightedOneBit);
    let q = measure(sensing, x0, &config.model, ts, weights)?;
    let b = stacked_intensities(&q);
    let opts = spectral_options(config, ts);
    let altmin = AltMinOptions { max_iters: config.max_iters, ..Default::default() };
    let mut traces = Vec::with_capacity(config.inits.len());
    let mut objectives = Vec::with_capacity(config.inits.len());
    for &kind in &config.inits {
        let init = initialize_quantized(kind, &q, &opts).map_err(at(Stage::Init))?;
        let run = alt_min(&Stacked(sensing), &b, &init.estimate, &altmin, Some(x0)).map_err(at(Stage::Refine))?;
        let mut trace: Vec<f64> = run.error_trace.iter().map(|p| p.value).collect();
        let last = *trace.last().expect("error trace holds the initial point");
        trace.resize(config.max_iters + 1, last);
        traces.push((kind, trace));
        objectives.push((kind, run.trace.iter().map(|p| p.value).collect()));
    }
    Ok(ConvergenceTrial { traces, objectives })
}

/// Gaussian paired sensing with a unit-norm signal.
pub fn altmin_trials(config: &ExperimentConfig) -> BenchResult<Vec<ConvergenceTrial>> {
    (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let ts = trial_seed(config.seed, t);
            let ens = PairedEnsemble::new(config.n, config.m, ts).map_err(at(Stage::Sensing))?;
            run_inits(config, &ens, &signal(config.n, 1.0, ts)?, ts)
        })
        .collect()
}

/// Coded diffraction patterns with `m / n` mask pairs and `‖x0‖² = n`, so that
/// both settings have unit mean intensity.
pub fn cdp_trials(config: &ExperimentConfig) -> BenchResult<Vec<ConvergenceTrial>> {
    (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let ts = trial_seed(config.seed, t);
            let pair = CdpPair::new(config.n, config.masks(), ts).map_err(at(Stage::Sensing))?;
            run_inits(config, &pair, &signal(config.n, config.n as f64, ts)?, ts)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub init: &'static str,
    pub iteration: usize,
    pub median_dist_sq: f64,
}

pub fn convergence_rows(config: &ExperimentConfig, trials: &[ConvergenceTrial]) -> Vec<ConvergenceRow> {
    let mut rows = Vec::new();
    for (k, kind) in config.inits.iter().enumerate() {
        for iteration in 0..=config.max_iters {
            let values: Vec<f64> = trials.iter().map(|t| t.traces[k].1[iteration]).collect();
            rows.push(ConvergenceRow { init: kind.name(), iteration, median_dist_sq: median(&values) });
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub stage: String,
    pub iteration: usize,
    pub value: Option<f64>,
    pub dist_sq: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RecoverOutcome {
    pub init: InitKind,
    pub estimate: ComplexVec,
    pub init_dist_sq: f64,
    pub dist_sq: f64,
    pub lambda_hat: Option<f64>,
    pub iterations: usize,
    pub trace: Vec<TraceRow>,
}

/// Single-shot pipeline: sensing, perturbation, quantization, every requested
/// init (the lowest-MSE one is kept when several are given), then refinement.
pub fn recover(config: &ExperimentConfig) -> BenchResult<RecoverOutcome> {
    let ts = trial_seed(config.seed, 0);
    let ens = PairedEnsemble::new(config.n, config.m, ts).map_err(at(Stage::Sensing))?;
    let x0 = signal(config.n, 1.0, ts)?;
    let q = measure(&ens, &x0, &config.model, ts, config.inits.contains(&InitKind::WeightedOneBit))?;
    let b = stacked_intensities(&q);
    let opts = spectral_options(config, ts);
    let op = Stacked(&ens);

    let mut reports: Vec<(InitKind, RecoveryReport)> = Vec::new();
    for &kind in &config.inits {
        reports.push((kind, initialize_quantized(kind, &q, &opts).map_err(at(Stage::Init))?));
    }
    let chosen = if reports.len() == 1 {
        0
    } else {
        let candidates: Vec<(String, ComplexVec)> =
            reports.iter().map(|(k, r)| (k.name().to_string(), r.estimate.clone())).collect();
        let (name, _) = multi_init_select(&candidates, &op, &b).map_err(at(Stage::Init))?;
        reports.iter().position(|(k, _)| k.name() == name).expect("selected candidate exists")
    };
    let (kind, init) = reports.swap_remove(chosen);
    let init_dist_sq = dist_sq(&init.estimate, &x0).map_err(at(Stage::Init))?;
    let mut trace: Vec<TraceRow> = init
        .trace
        .iter()
        .map(|p| TraceRow { stage: format!("power:{kind}"), iteration: p.iteration, value: Some(p.value), dist_sq: None })
        .collect();

    let refined = match config.refine {
        Refine::None => None,
        Refine::Altmin => {
            let altmin = AltMinOptions { max_iters: config.max_iters, ..Default::default() };
            Some(alt_min(&op, &b, &init.estimate, &altmin, Some(&x0)).map_err(at(Stage::Refine))?)
        }
        Refine::Resampled => {
            let data = ResamplingData::Paired { ensemble: &ens, b1: &q.observed_first, b2: &q.observed_second };
            let ropts = ResamplingOptions { epsilon: config.epsilon, init: kind, spectral: opts, ..Default::default() };
            Some(alt_min_resampled(data, &ropts, Some(&x0)).map_err(at(Stage::Refine))?)
        }
    };

    let (estimate, iterations) = match refined {
        None => (init.estimate.clone(), init.iterations),
        Some(run) => {
            let stage = match config.refine {
                Refine::Resampled => "resampled",
                _ => "altmin",
            };
            for p in &run.error_trace {
                let value = run.trace.iter().find(|o| o.iteration == p.iteration).map(|o| o.value);
                trace.push(TraceRow { stage: stage.into(), iteration: p.iteration, value, dist_sq: Some(p.value) });
            }
            (run.estimate, run.iterations)
        }
    };
    Ok(RecoverOutcome {
        init: kind,
        dist_sq: dist_sq(&estimate, &x0).map_err(at(Stage::Refine))?,
        estimate,
        init_dist_sq,
        lambda_hat: init.lambda_hat,
        iterations,
        trace,
    })
}
