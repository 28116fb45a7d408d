use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Perturbation `θ` applied to each phase-less intensity before quantization.
///
/// Textual grammar (used by the CLI and run manifests): `identity`,
/// `tanh:alpha=<f>`, `expnoise:sigma=<f>`, `poisson:eta=<f>`,
/// `clipgauss:sigma=<f>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MeasurementModel {
    Identity,
    /// `θ(z) = tanh(α z)`, `α > 0`.
    TanhDistortion { alpha: f64 },
    /// `θ(z) = z + ν`, `ν ~ Exp` with variance `σ` (mean `√σ`), `σ ≥ 0`.
    ExponentialNoise { sigma: f64 },
    /// `θ(z) ~ Poisson(z / η)`, `η > 0`.
    PoissonNoise { eta: f64 },
    /// `θ(z) = z + σ·max(g, 0)`, `g ~ N(0, 1)`, `σ ≥ 0`.
    ClippedGaussianNoise { sigma: f64 },
}

fn param_error(spec: String, reason: impl Into<String>) -> Error {
    Error::ModelSpec { spec, reason: reason.into() }
}

impl MeasurementModel {
    /// Checks parameter ranges.
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            Self::Identity => true,
            Self::TanhDistortion { alpha } => alpha > 0.0 && alpha.is_finite(),
            Self::ExponentialNoise { sigma } | Self::ClippedGaussianNoise { sigma } => sigma >= 0.0 && sigma.is_finite(),
            Self::PoissonNoise { eta } => eta > 0.0 && eta.is_finite(),
        };
        if ok {
            Ok(self)
        } else {
            Err(param_error(self.to_string(), "parameter out of range"))
        }
    }

    /// Models whose `θ` is a fixed strictly increasing function. Only for these
    /// is the sign comparison independent of the randomness.
    pub fn is_deterministic_increasing(&self) -> bool {
        matches!(self, Self::Identity | Self::TanhDistortion { .. })
    }

    /// Whether the ratio weights `b¹/(b¹+b²)` make sense on the observed values:
    /// identity, or additive non-negative intensity noise.
    pub fn supports_weights(&self) -> bool {
        matches!(self, Self::Identity | Self::ExponentialNoise { .. } | Self::ClippedGaussianNoise { .. })
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::TanhDistortion { .. } => "tanh",
            Self::ExponentialNoise { .. } => "expnoise",
            Self::PoissonNoise { .. } => "poisson",
            Self::ClippedGaussianNoise { .. } => "clipgauss",
        }
    }

    /// The model's scalar parameter, if any.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Self::Identity => None,
            Self::TanhDistortion { alpha } => Some(alpha),
            Self::ExponentialNoise { sigma } | Self::ClippedGaussianNoise { sigma } => Some(sigma),
            Self::PoissonNoise { eta } => Some(eta),
        }
    }
}

/// `θ(z)` for a single intensity `z ≥ 0`, drawing any noise from `rng`.
pub fn apply_model<R: Rng + ?Sized>(model: &MeasurementModel, z: f64, rng: &mut R) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::InvalidParameter(format!("intensity must be >= 0, got {z}")));
    }
    Ok(match *model {
        MeasurementModel::Identity => z,
        MeasurementModel::TanhDistortion { alpha } => (alpha * z).tanh(),
        MeasurementModel::ExponentialNoise { sigma } if sigma == 0.0 => z,
        MeasurementModel::ExponentialNoise { sigma } => z + rng::sample_exponential(sigma.sqrt(), rng)?,
        MeasurementModel::PoissonNoise { eta } => rng::sample_poisson(z / eta, rng)? as f64,
        MeasurementModel::ClippedGaussianNoise { sigma } => z + sigma * rng::standard_normal(rng).max(0.0),
    })
}

impl fmt::Display for MeasurementModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Identity => write!(f, "identity"),
            Self::TanhDistortion { alpha } => write!(f, "tanh:alpha={alpha}"),
            Self::ExponentialNoise { sigma } => write!(f, "expnoise:sigma={sigma}"),
            Self::PoissonNoise { eta } => write!(f, "poisson:eta={eta}"),
            Self::ClippedGaussianNoise { sigma } => write!(f, "clipgauss:sigma={sigma}"),
        }
    }
}

impl FromStr for MeasurementModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = s.trim();
        let (family, rest) = match spec.split_once(':') {
            Some((family, rest)) => (family, Some(rest)),
            None => (spec, None),
        };
        let param = |name: &str| -> Result<f64> {
            let rest = rest.ok_or_else(|| param_error(spec.into(), format!("missing '{name}=<value>'")))?;
            let value = rest
                .strip_prefix(name)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| param_error(spec.into(), format!("expected '{name}=<value>'")))?;
            value.parse::<f64>().map_err(|_| param_error(spec.into(), format!("'{value}' is not a number")))
        };
        let model = match family {
            "identity" if rest.is_none() => Self::Identity,
            "identity" => return Err(param_error(spec.into(), "identity takes no parameters")),
            "tanh" => Self::TanhDistortion { alpha: param("alpha")? },
            "expnoise" => Self::ExponentialNoise { sigma: param("sigma")? },
            "poisson" => Self::PoissonNoise { eta: param("eta")? },
            "clipgauss" => Self::ClippedGaussianNoise { sigma: param("sigma")? },
            other => return Err(param_error(spec.into(), format!("unknown model family '{other}'"))),
        };
        model.validate()
    }
}

impl TryFrom<String> for MeasurementModel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MeasurementModel> for String {
    fn from(m: MeasurementModel) -> String {
        m.to_string()
    }
}
