use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onebit_core::channels::MeasurementModel;
use onebit_core::recovery::InitKind;

use crate::config::{ExperimentConfig, ExperimentKind, Manifest, Refine};
use crate::error::{BenchError, BenchResult};
use crate::run::{execute, RunOutput};

#[derive(Debug, Parser)]
#[command(name = "onebit-bench", version, about = "One-bit phase retrieval experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo λ for a list of perturbation models.
    LambdaSweep(RunArgs),
    /// 1bitPhase vs SubExpPhase error under tanh distortion.
    DistortionSweep(RunArgs),
    /// Single recovery run; writes the iteration trace.
    Recover(RunArgs),
    /// AltMin error per iteration from each init, Gaussian sensing.
    AltminConvergence(RunArgs),
    /// AltMin error per iteration from each init, coded diffraction patterns.
    CdpConvergence(RunArgs),
    /// Rerun the experiment recorded in a manifest.
    Replay {
        manifest: PathBuf,
        /// Write the CSV here instead of the recorded path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// Signal dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of measurement pairs.
    #[arg(long, conflicts_with = "ratio")]
    pub m: Option<usize>,
    /// Pairs per signal dimension, m = ratio·n (mask pairs for CDP).
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Model spec, e.g. identity, tanh:alpha=2, expnoise:sigma=1, poisson:eta=4,
    /// clipgauss:sigma=0.8. Comma-separated list for lambda-sweep.
    #[arg(long, value_delimiter = ',')]
    pub model: Vec<MeasurementModel>,
    /// Distortion levels for distortion-sweep.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    /// Init kinds: random, subexp, 1bit, weighted1bit.
    #[arg(long, value_delimiter = ',')]
    pub init: Vec<InitKind>,
    /// Target accuracy for resampled refinement.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Power-iteration tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// AltMin iteration cap.
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Monte-Carlo samples per model (lambda-sweep).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output CSV; the manifest is written alongside.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub refine: Option<Refine>,
    /// Spectral shift inside the power iteration.
    #[arg(long, value_enum)]
    pub shift: Option<Switch>,
}

impl RunArgs {
    /// Defaults for `kind` overridden by the given flags.
    pub fn into_config(self, kind: ExperimentKind) -> BenchResult<ExperimentConfig> {
        let mut c = ExperimentConfig::defaults(kind);
        if let Some(n) = self.n {
            c.n = n;
            if self.m.is_none() && self.ratio.is_none() {
                // keep the default oversampling
                let d = ExperimentConfig::defaults(kind);
                c.m = d.m * n / d.n;
            }
        }
        if let Some(m) = self.m {
            c.m = m;
        }
        if let Some(ratio) = self.ratio {
            if !(ratio > 0.0) || !ratio.is_finite() {
                return Err(BenchError::Config(format!("ratio must be positive, got {ratio}")));
            }
            c.m = (ratio * c.n as f64).round() as usize;
        }
        match (kind, self.model.len()) {
            (_, 0) => {}
            (ExperimentKind::LambdaSweep, _) => c.models = self.model,
            (_, 1) => c.model = self.model[0],
            (_, k) => return Err(BenchError::Config(format!("{} takes a single --model, got {k}", kind.name()))),
        }
        if !self.alphas.is_empty() {
            c.alphas = self.alphas;
        }
        if !self.init.is_empty() {
            c.inits = self.init;
        }
        c.epsilon = self.epsilon.unwrap_or(c.epsilon);
        c.trials = self.trials.unwrap_or(c.trials);
        c.seed = self.seed.unwrap_or(c.seed);
        c.tol = self.tol.unwrap_or(c.tol);
        c.max_iters = self.max_iters.unwrap_or(c.max_iters);
        c.samples = self.samples.unwrap_or(c.samples);
        c.refine = self.refine.unwrap_or(c.refine);
        c.shift = self.shift.map_or(c.shift, |s| s == Switch::On);
        if let Some(out) = self.out {
            c.out = out;
        }
        c.validate()?;
        Ok(c)
    }
}

pub fn dispatch(cli: Cli) -> BenchResult<RunOutput> {
    let (kind, args) = match cli.command {
        Command::LambdaSweep(a) => (ExperimentKind::LambdaSweep, a),
        Command::DistortionSweep(a) => (ExperimentKind::DistortionSweep, a),
        Command::Recover(a) => (ExperimentKind::Recover, a),
        Command::AltminConvergence(a) => (ExperimentKind::AltminConvergence, a),
        Command::CdpConvergence(a) => (ExperimentKind::CdpConvergence, a),
        Command::Replay { manifest, out } => {
            let mut config = Manifest::load(&manifest)?.config;
            if let Some(out) = out {
                config.out = out;
            }
            return execute(&config);
        }
    };
    execute(&args.into_config(kind)?)
}
