//! Numerical side of the eigenvalue problem: the exact Green's function,
//! its Nyström discretisation, and quadrature-based checks of `T_n`.

pub mod kernel;
pub mod nystrom;
pub mod transform;

pub use kernel::{GreenKernel, KernelEvaluator};
pub use nystrom::{nystrom_eigs, nystrom_eigs_with, rank1_ratio, NystromConfig, SpectralEstimate};
pub use transform::{apply_t, empirical_h};
