//! Bounds on the minimal eigenvalue of the clamped polyharmonic operator
//! `(-1)^n d^{2n}/dt^{2n}` on `(-1, 1)`, and the energy-density bounds for
//! massive scalar fields that follow from them.
//!
//! - [`rational`]: exact fractions, polynomials, exact linear solves.
//! - [`exact_bounds`]: the `alpha_j` coefficients, `R_n`, and the bracket on
//!   the spectral radius of the solution operator.
//! - [`special`]: log-gamma, digamma, trigamma, Bessel `K`, and `Q_d`.
//! - [`spectral`]: Green's function, Nyström eigenvalues, Fourier tails.
//! - [`qei`]: the energy-inequality constants, bounds and optimisation
//!   over `n`.
//! - [`cylinder`]: Casimir energy density on the cylinder spacetime.
//! - [`lp_norms`]: `L^p` operator-norm bounds.

pub mod error;
pub mod cylinder;
pub mod exact_bounds;
pub mod lp_norms;
pub mod qei;
pub mod quadrature;
pub mod rational;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
