//! Perturbation models, one-bit quantization and the signal-to-noise constant λ.

mod lambda;
mod model;
mod quantize;

pub use lambda::{lambda_closed_form, lambda_monte_carlo, LambdaEstimate};
pub use model::{apply_model, MeasurementModel};
pub use quantize::{compare_perturbed, quantize, quantize_signal, ratio_weights, QuantizedData, QuantizedSignal};
