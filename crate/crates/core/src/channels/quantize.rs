use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numkit::ComplexVec;
use crate::sensing::{Arm, PairedSensing};

use super::model::{apply_model, MeasurementModel};

/// One-bit quantizer `sign(b1 − b2)`; exact ties map to 0.
pub fn quantize(b1: f64, b2: f64) -> i8 {
    match b1.partial_cmp(&b2) {
        Some(Ordering::Greater) => 1,
        Some(Ordering::Less) => -1,
        _ => 0,
    }
}

/// Intensity ratios `(b1/(b1+b2), b2/(b1+b2))`.
pub fn ratio_weights(b1: f64, b2: f64) -> Result<(f64, f64)> {
    if !(b1 >= 0.0 && b2 >= 0.0) {
        return Err(Error::InvalidParameter(format!("ratio weights need non-negative intensities, got ({b1}, {b2})")));
    }
    let total = b1 + b2;
    if total == 0.0 {
        return Err(Error::InvalidParameter("ratio weights undefined for b1 + b2 = 0".into()));
    }
    let r1 = b1 / total;
    Ok((r1, 1.0 - r1))
}

/// Sign comparison of two perturbed intensities `p1 = θ(b1)`, `p2 = θ(b2)`.
///
/// For a fixed strictly increasing `θ` the sign equals `sign(b1 − b2)`, but
/// `tanh` rounds to exactly 1.0 for large arguments, producing spurious ties.
/// Those ties are resolved from the clean intensities; ties from random
/// perturbations (Poisson counts) stay 0.
pub fn compare_perturbed(model: &MeasurementModel, b1: f64, b2: f64, p1: f64, p2: f64) -> i8 {
    match quantize(p1, p2) {
        0 if model.is_deterministic_increasing() => quantize(b1, b2),
        y => y,
    }
}

/// One-bit measurements bound to the paired sensing that produced them.
#[derive(Debug, Clone)]
pub struct QuantizedData<'a, S: ?Sized> {
    sensing: &'a S,
    y: Vec<i8>,
    weights: Option<Vec<(f64, f64)>>,
}

impl<'a, S: PairedSensing + ?Sized> QuantizedData<'a, S> {
    pub fn new(sensing: &'a S, y: Vec<i8>, weights: Option<Vec<(f64, f64)>>) -> Result<Self> {
        let m = sensing.pairs();
        if y.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: y.len() });
        }
        if let Some(i) = y.iter().position(|v| v.abs() > 1) {
            return Err(Error::InvalidParameter(format!("label y[{i}] = {} outside {{-1, 0, 1}}", y[i])));
        }
        if let Some(w) = &weights {
            if w.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: w.len() });
            }
            for (i, &(r1, r2)) in w.iter().enumerate() {
                if !(0.0..=1.0).contains(&r1) || !(0.0..=1.0).contains(&r2) || (r1 + r2 - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!("weights[{i}] = ({r1}, {r2}) are not ratios summing to 1")));
                }
            }
        }
        Ok(Self { sensing, y, weights })
    }

    pub fn sensing(&self) -> &'a S {
        self.sensing
    }

    pub fn labels(&self) -> &[i8] {
        &self.y
    }

    pub fn weights(&self) -> Option<&[(f64, f64)]> {
        self.weights.as_deref()
    }

    /// Copy without the ratio weights.
    pub fn without_weights(&self) -> Self {
        Self { sensing: self.sensing, y: self.y.clone(), weights: None }
    }
}

/// Measurements of `x0` through the paired sensing: perturbed intensities of
/// both arms plus their one-bit comparison.
#[derive(Debug, Clone)]
pub struct QuantizedSignal<'a, S: ?Sized> {
    pub data: QuantizedData<'a, S>,
    /// `θ(|<a¹_i, x0>|²)`
    pub observed_first: Vec<f64>,
    /// `θ(|<a²_i, x0>|²)`
    pub observed_second: Vec<f64>,
}

/// Quantizes `x0`: `y_i = sign(θ(b¹_i) − θ(b²_i))`.
///
/// Noise is drawn from `rng` in pair order, first arm then second. With
/// `with_weights` the ratio weights are computed from the observed intensities;
/// this is only allowed for models where [`MeasurementModel::supports_weights`]
/// holds. Pairs whose observed intensities sum to zero get `y = 0`.
pub fn quantize_signal<'a, S, R>(
    sensing: &'a S,
    x0: &ComplexVec,
    model: &MeasurementModel,
    rng: &mut R,
    with_weights: bool,
) -> Result<QuantizedSignal<'a, S>>
where
    S: PairedSensing + ?Sized,
    R: Rng + ?Sized,
{
    model.validate()?;
    if x0.dim() != sensing.dim() {
        return Err(Error::DimensionMismatch { expected: sensing.dim(), got: x0.dim() });
    }
    if x0.norm_sqr() == 0.0 {
        return Err(Error::ZeroVector);
    }
    if with_weights && !model.supports_weights() {
        return Err(Error::WeightsUnsupported(model.to_string()));
    }
    let clean1: Vec<f64> = sensing.apply_arm(Arm::First, x0).iter().map(|z| z.norm_sqr()).collect();
    let clean2: Vec<f64> = sensing.apply_arm(Arm::Second, x0).iter().map(|z| z.norm_sqr()).collect();

    let m = sensing.pairs();
    let mut y = Vec::with_capacity(m);
    let mut observed_first = Vec::with_capacity(m);
    let mut observed_second = Vec::with_capacity(m);
    let mut weights = with_weights.then(|| Vec::with_capacity(m));
    for (&b1, &b2) in clean1.iter().zip(&clean2) {
        let p1 = apply_model(model, b1, rng)?;
        let p2 = apply_model(model, b2, rng)?;
        let mut label = compare_perturbed(model, b1, b2, p1, p2);
        if let Some(w) = weights.as_mut() {
            match ratio_weights(p1, p2) {
                Ok(r) => w.push(r),
                Err(_) => {
                    label = 0;
                    w.push((0.5, 0.5));
                }
            }
        }
        y.push(label);
        observed_first.push(p1);
        observed_second.push(p2);
    }
    Ok(QuantizedSignal { data: QuantizedData::new(sensing, y, weights)?, observed_first, observed_second })
}
