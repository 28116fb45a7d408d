//! One-bit phase retrieval.
//!
//! Recovers a complex signal `x0` from sign comparisons of paired phase-less
//! intensities `y_i = sign(θ(|<a¹_i, x0>|²) − θ(|<a²_i, x0>|²))`, where `θ` is an
//! unknown rank-preserving perturbation (distortion or noise).
//!
//! The crate is organised bottom-up:
//!
//! * [`numkit`]: complex vectors, matrix-free power iteration, CGLS, unitary DFT,
//!   and a dense Hermitian eigensolver used as an oracle.
//! * [`sensing`]: seeded Gaussian ensembles, coded-diffraction operators and samplers.
//! * [`channels`]: perturbation models, the one-bit quantizer, ratio weights and λ.
//! * [`recovery`]: spectral estimators and alternating minimization.

pub mod channels;
pub mod error;
pub mod numkit;
pub mod recovery;
pub mod rng;
pub mod sensing;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numkit::ComplexVec;
