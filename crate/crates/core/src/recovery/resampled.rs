use std::ops::Range;

use crate::error::{Error, Result};
use crate::numkit::{dist_sq, CglsOptions, ComplexVec};
use crate::sensing::{MeasurementOperator, PairedEnsemble, PlainEnsemble, Stacked};

use super::altmin::{altmin_step, mse};
use super::init::{initialize, random_init};
use super::spectral::{subexp_phase, SpectralOptions};
use super::{InitKind, RecoveryReport, TracePoint};

/// How the number of refinement stages `t₀` is derived from `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StageRule {
    /// `t₀ = ⌈c·ln(1/ε)⌉`.
    #[default]
    Logarithmic,
    /// `t₀ = ⌈c·ln(1/ε)·n⌉`, the stage count read literally with the extra factor `n`.
    LiteralTimesN,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResamplingOptions {
    /// Target accuracy `ε ∈ (0, 1)`.
    pub epsilon: f64,
    pub c_stages: f64,
    pub init: InitKind,
    pub stage_rule: StageRule,
    pub spectral: SpectralOptions,
    pub cgls: CglsOptions,
}

impl Default for ResamplingOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            c_stages: 1.0,
            init: InitKind::OneBit,
            stage_rule: StageRule::Logarithmic,
            spectral: SpectralOptions::default(),
            cgls: CglsOptions::default(),
        }
    }
}

/// Measurements consumed by [`alt_min_resampled`].
#[derive(Debug, Clone, Copy)]
pub enum ResamplingData<'a> {
    /// Paired ensemble with observed intensities of both arms. Blocks are
    /// formed over pairs; each stage stacks both arms of its block.
    Paired { ensemble: &'a PairedEnsemble, b1: &'a [f64], b2: &'a [f64] },
    /// Plain ensemble; only the random and sub-exponential inits apply.
    Plain { ensemble: &'a PlainEnsemble, b: &'a [f64] },
}

impl ResamplingData<'_> {
    fn n(&self) -> usize {
        match self {
            Self::Paired { ensemble, .. } => ensemble.n(),
            Self::Plain { ensemble, .. } => ensemble.dim(),
        }
    }

    /// Number of partitionable units (pairs or rows).
    fn units(&self) -> usize {
        match self {
            Self::Paired { ensemble, .. } => ensemble.m(),
            Self::Plain { ensemble, .. } => ensemble.m(),
        }
    }

    fn measurements_per_unit(&self) -> usize {
        match self {
            Self::Paired { .. } => 2,
            Self::Plain { .. } => 1,
        }
    }

    fn check(&self) -> Result<()> {
        let m = self.units();
        let lens: Vec<usize> = match self {
            Self::Paired { b1, b2, .. } => vec![b1.len(), b2.len()],
            Self::Plain { b, .. } => vec![b.len()],
        };
        if let Some(&bad) = lens.iter().find(|&&l| l != m) {
            return Err(Error::DimensionMismatch { expected: m, got: bad });
        }
        Ok(())
    }
}

/// `t₀` for the given accuracy; 0 when `ε ≥ 1`.
pub fn stage_count(epsilon: f64, c_stages: f64, n: usize, rule: StageRule) -> Result<usize> {
    if !(epsilon > 0.0) || !(c_stages > 0.0) || !c_stages.is_finite() {
        return Err(Error::InvalidParameter(format!("need epsilon > 0 and c > 0, got epsilon={epsilon}, c={c_stages}")));
    }
    let base = c_stages * (1.0 / epsilon).ln();
    let t0 = match rule {
        StageRule::Logarithmic => base,
        StageRule::LiteralTimesN => base * n as f64,
    };
    // Guard against ln rounding pushing an exact integer up by one ulp.
    let rounded = t0.round();
    Ok(if (t0 - rounded).abs() < 1e-9 { rounded.max(0.0) as usize } else { t0.ceil().max(0.0) as usize })
}

/// Contiguous blocks: `blocks` of size `⌊units/blocks⌋`, with the remainder
/// added to block 0.
fn partition(units: usize, blocks: usize) -> Vec<Range<usize>> {
    let size = units / blocks;
    let first = size + units % blocks;
    let mut out = vec![0..first];
    for k in 1..blocks {
        let start = first + (k - 1) * size;
        out.push(start..start + size);
    }
    out
}

/// Alternating minimization with resampling: the measurements are split into
/// `t₀ + 1` disjoint blocks; block 0 feeds the initializer and block `t + 1`
/// feeds the single phase + least-squares update of stage `t`.
///
/// The trace records `dist_sq` to `reference` after the init and every stage
/// when one is supplied, otherwise each stage's block objective.
pub fn alt_min_resampled(
    data: ResamplingData<'_>,
    opts: &ResamplingOptions,
    reference: Option<&ComplexVec>,
) -> Result<RecoveryReport> {
    data.check()?;
    let n = data.n();
    let t0 = stage_count(opts.epsilon, opts.c_stages, n, opts.stage_rule)?;
    let blocks = t0 + 1;
    let per_unit = data.measurements_per_unit();
    let units_needed = blocks * n.div_ceil(per_unit);
    if data.units() < units_needed {
        return Err(Error::InsufficientMeasurements { stages: blocks, n, required: units_needed, got: data.units() });
    }
    let parts = partition(data.units(), blocks);

    let init = match data {
        ResamplingData::Paired { ensemble, b1, b2 } => {
            let r = parts[0].clone();
            initialize(opts.init, &ensemble.block(r.clone()), &b1[r.clone()], &b2[r], &opts.spectral)?
        }
        ResamplingData::Plain { ensemble, b } => match opts.init {
            InitKind::Random => RecoveryReport {
                estimate: random_init(n, opts.spectral.seed)?,
                lambda_hat: None,
                iterations: 0,
                trace: Vec::new(),
                error_trace: Vec::new(),
                converged: true,
            },
            InitKind::SubExp => subexp_phase(&ensemble.block(parts[0].clone()), &b[parts[0].clone()], &opts.spectral)?,
            other => {
                return Err(Error::InvalidParameter(format!("{other} initialization needs a paired ensemble")));
            }
        },
    };

    let mut x = init.estimate.to_vec();
    let mut trace = Vec::with_capacity(blocks);
    let mut error_trace = Vec::new();
    if let Some(x0) = reference {
        error_trace.push(TracePoint { iteration: 0, value: dist_sq(&init.estimate, x0)? });
    }

    for (t, range) in parts.iter().skip(1).enumerate() {
        let (x_next, objective) = match data {
            ResamplingData::Paired { ensemble, b1, b2 } => {
                let block = ensemble.block(range.clone());
                let op = Stacked(&block);
                let b: Vec<f64> = b1[range.clone()].iter().chain(&b2[range.clone()]).copied().collect();
                stage(&op, &b, &x, &opts.cgls)?
            }
            ResamplingData::Plain { ensemble, b } => stage(&ensemble.block(range.clone()), &b[range.clone()], &x, &opts.cgls)?,
        };
        x = x_next;
        trace.push(TracePoint { iteration: t + 1, value: objective });
        if let Some(x0) = reference {
            error_trace.push(TracePoint { iteration: t + 1, value: dist_sq(&ComplexVec::new(x.clone())?, x0)? });
        }
    }

    Ok(RecoveryReport {
        estimate: ComplexVec::new(x)?,
        lambda_hat: init.lambda_hat,
        iterations: t0,
        trace,
        error_trace,
        converged: true,
    })
}

fn stage<O: MeasurementOperator + ?Sized>(
    op: &O,
    b: &[f64],
    x: &[num_complex::Complex64],
    cgls: &CglsOptions,
) -> Result<(Vec<num_complex::Complex64>, f64)> {
    let sqrt_b: Vec<f64> = b.iter().map(|v| v.sqrt()).collect();
    let z = op.apply(x);
    let (x_next, _) = altmin_step(op, &sqrt_b, x, &z, cgls)?;
    let objective = mse(op, b, &x_next)?;
    Ok((x_next, objective))
}
