//! Numerical kernels shared by the sensing and recovery layers.

mod cgls;
mod dense;
mod dft;
mod power;
mod vector;

pub use cgls::{cgls, CglsOptions, CglsOutcome};
pub use dense::{dense_top_eigenvector, HermitianDense};
pub use dft::{dft, idft, Dft};
pub use power::{power_iteration, PowerOptions, PowerOutcome};
pub use vector::{
    align_phase, dist_sq, inner, phase_distance, phase_op, ComplexVec,
};

pub(crate) use vector::{axpy, dot, norm_sqr, phase_into};
