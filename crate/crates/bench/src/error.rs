use std::fmt;

use onebit_core::Error as CoreError;

/// Pipeline stage an error is attributed to in CLI messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Sensing,
    Quantize,
    Init,
    Refine,
    Lambda,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Sensing => "sensing",
            Stage::Quantize => "quantize",
            Stage::Init => "init",
            Stage::Refine => "refine",
            Stage::Lambda => "lambda",
            Stage::Output => "output",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{stage} failed: {source}")]
    Numerical { stage: Stage, source: CoreError },
    #[error("{stage}: {source}")]
    Invalid { stage: Stage, source: CoreError },
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("manifest error: {0}")]
    Manifest(#[from] serde_json::Error),
}

pub type BenchResult<T> = std::result::Result<T, BenchError>;

impl BenchError {
    /// 2 for configuration problems, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            BenchError::Config(_) | BenchError::Invalid { .. } | BenchError::Manifest(_) => 2,
            BenchError::Numerical { .. } => 3,
            BenchError::Io { .. } | BenchError::Csv(_) => 1,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        BenchError::Io { path: path.display().to_string(), source }
    }
}

/// Labels a core error with its stage, sorting it into a usage or numerical failure.
pub fn at(stage: Stage) -> impl Fn(CoreError) -> BenchError {
    move |source| match source {
        CoreError::InvalidParameter(_)
        | CoreError::ModelSpec { .. }
        | CoreError::WeightsUnsupported(_)
        | CoreError::MissingWeights
        | CoreError::InsufficientMeasurements { .. }
        | CoreError::DimensionMismatch { .. }
        | CoreError::NoCandidates => BenchError::Invalid { stage, source },
        _ => BenchError::Numerical { stage, source },
    }
}
