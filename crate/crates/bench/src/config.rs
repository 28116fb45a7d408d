use std::path::{Path, PathBuf};

use onebit_core::channels::MeasurementModel;
use onebit_core::recovery::InitKind;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, BenchResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    LambdaSweep,
    DistortionSweep,
    Recover,
    AltminConvergence,
    CdpConvergence,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LambdaSweep => "lambda-sweep",
            Self::DistortionSweep => "distortion-sweep",
            Self::Recover => "recover",
            Self::AltminConvergence => "altmin-convergence",
            Self::CdpConvergence => "cdp-convergence",
        }
    }
}

/// Refinement applied after the spectral init in `recover`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Refine {
    None,
    Altmin,
    Resampled,
}

/// Everything needed to rerun an experiment. `m` always counts measurement
/// pairs; a paired run observes `2m` intensities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub m: usize,
    /// Perturbation for single-model experiments.
    pub model: MeasurementModel,
    /// Models evaluated by `lambda-sweep`.
    pub models: Vec<MeasurementModel>,
    /// Distortion levels for `distortion-sweep`.
    pub alphas: Vec<f64>,
    pub inits: Vec<InitKind>,
    /// Target accuracy of resampled refinement.
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    /// Power-iteration tolerance.
    pub tol: f64,
    /// Alternating-minimization iteration cap.
    pub max_iters: usize,
    /// Monte-Carlo draws per model in `lambda-sweep`.
    pub samples: usize,
    pub refine: Refine,
    /// Spectral shift `μ = mean pair energy` inside the one-bit power iterations.
    pub shift: bool,
    pub out: PathBuf,
}

/// Default `lambda-sweep` grid: exponential noise σ, tanh α and Poisson η.
pub fn default_lambda_models() -> Vec<MeasurementModel> {
    let mut models = vec![MeasurementModel::Identity];
    models.extend([0.25, 0.5, 1.0, 2.0, 4.0].map(|sigma| MeasurementModel::ExponentialNoise { sigma }));
    models.extend([0.25, 0.5, 1.0, 2.0, 4.0, 8.0].map(|alpha| MeasurementModel::TanhDistortion { alpha }));
    models.extend([0.25, 0.5, 1.0, 2.0, 4.0].map(|eta| MeasurementModel::PoissonNoise { eta }));
    models
}

impl ExperimentConfig {
    /// Desk-scale defaults for `kind`.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let base = Self {
            kind,
            n: 128,
            m: 128 * 64,
            model: MeasurementModel::Identity,
            models: Vec::new(),
            alphas: Vec::new(),
            inits: vec![InitKind::OneBit],
            epsilon: 0.1,
            trials: 20,
            seed: 0,
            tol: 1e-8,
            max_iters: 100,
            samples: 1_000_000,
            refine: Refine::None,
            shift: true,
            out: PathBuf::from(format!("{}.csv", kind.name())),
        };
        match kind {
            ExperimentKind::LambdaSweep => Self { models: default_lambda_models(), trials: 1, ..base },
            ExperimentKind::DistortionSweep => Self { alphas: vec![0.01, 0.5, 1.0, 2.0, 4.0, 8.0], ..base },
            ExperimentKind::Recover => Self { n: 32, m: 4000, trials: 1, max_iters: 200, ..base },
            ExperimentKind::AltminConvergence | ExperimentKind::CdpConvergence => {
                Self { n: 512, m: 4 * 512, inits: InitKind::ALL.to_vec(), ..base }
            }
        }
    }

    pub fn validate(&self) -> BenchResult<()> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.n == 0 || self.m == 0 {
            return fail(format!("n and m must be positive, got n={} m={}", self.n, self.m));
        }
        if self.trials == 0 {
            return fail("trials must be >= 1".into());
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return fail(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iters == 0 {
            return fail("max-iters must be >= 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        for model in self.models.iter().chain(std::iter::once(&self.model)) {
            model.validate().map_err(|e| BenchError::Config(e.to_string()))?;
        }
        match self.kind {
            ExperimentKind::LambdaSweep => {
                if self.models.is_empty() {
                    return fail("lambda-sweep needs at least one model".into());
                }
                if self.samples < 1000 {
                    return fail(format!("samples must be >= 1000, got {}", self.samples));
                }
            }
            ExperimentKind::DistortionSweep => {
                if self.alphas.is_empty() || self.alphas.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
                    return fail("distortion-sweep needs a non-empty list of positive alphas".into());
                }
            }
            ExperimentKind::Recover | ExperimentKind::AltminConvergence | ExperimentKind::CdpConvergence => {
                if self.inits.is_empty() {
                    return fail("at least one init kind is required".into());
                }
                if self.inits.contains(&InitKind::WeightedOneBit) && !self.model.supports_weights() {
                    let e = onebit_core::Error::WeightsUnsupported(self.model.to_string());
                    return fail(e.to_string());
                }
            }
        }
        if self.kind == ExperimentKind::CdpConvergence && self.m % self.n != 0 {
            return fail(format!("cdp-convergence needs m to be a multiple of n (one mask per n pairs), got m={} n={}", self.m, self.n));
        }
        Ok(())
    }

    /// Number of mask pairs in a CDP run.
    pub fn masks(&self) -> usize {
        self.m / self.n
    }
}

/// Serialized next to every CSV; replaying it regenerates the CSV byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
}

impl Manifest {
    pub fn new(config: ExperimentConfig) -> Self {
        Self { tool: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into(), config }
    }

    pub fn load(path: &Path) -> BenchResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> BenchResult<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| BenchError::io(path, e))
    }
}

/// `results.csv` → `results.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}
