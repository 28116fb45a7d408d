//! Recovery algorithms: the spectral estimators (one-bit, weighted one-bit,
//! sub-exponential), alternating minimization with and without resampling,
//! and selection among several initializations.

mod altmin;
mod init;
mod resampled;
mod select;
mod spectral;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numkit::ComplexVec;

pub use altmin::{alt_min, mse, AltMinOptions};
pub use init::{initialize, initialize_quantized, random_init};
pub use resampled::{alt_min_resampled, stage_count, ResamplingData, ResamplingOptions, StageRule};
pub use select::multi_init_select;
pub use spectral::{
    one_bit_matvec, one_bit_phase, subexp_matvec, subexp_phase, weighted_one_bit_matvec, weighted_one_bit_phase,
    ShiftMode, SpectralOptions,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct RecoveryReport {
    /// Unit norm for spectral methods; alternating minimization keeps the
    /// least-squares scale.
    pub estimate: ComplexVec,
    /// Top-eigenvalue estimate of the spectral step, when there was one.
    pub lambda_hat: Option<f64>,
    pub iterations: usize,
    /// Power-iteration step sizes, or the alternating-minimization objective
    /// `‖Ax − B·Ph(Ax)‖²` (entry 0 is the initial point).
    pub trace: Vec<TracePoint>,
    /// `dist_sq` to a reference signal per iteration, when one was supplied.
    pub error_trace: Vec<TracePoint>,
    pub converged: bool,
}

/// How the alternating minimization is initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InitKind {
    Random,
    SubExp,
    OneBit,
    WeightedOneBit,
}

impl InitKind {
    pub const ALL: [InitKind; 4] = [InitKind::Random, InitKind::SubExp, InitKind::OneBit, InitKind::WeightedOneBit];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::SubExp => "subexp",
            Self::OneBit => "1bit",
            Self::WeightedOneBit => "weighted1bit",
        }
    }
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(Self::Random),
            "subexp" => Ok(Self::SubExp),
            "1bit" | "onebit" => Ok(Self::OneBit),
            "weighted1bit" | "weightedonebit" => Ok(Self::WeightedOneBit),
            other => Err(Error::InvalidParameter(format!(
                "unknown init kind '{other}' (expected random, subexp, 1bit, weighted1bit)"
            ))),
        }
    }
}

impl TryFrom<String> for InitKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<InitKind> for String {
    fn from(k: InitKind) -> String {
        k.name().to_string()
    }
}
