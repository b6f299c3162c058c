//! `L^p` operator norms of `T_n`.
//!
//! Because the kernel is nonnegative, `||T_n||_{inf,inf} = sup_t (T_n 1)(t)
//! = 1/(2n)!`, and the same holds on `L^1` by duality. Interpolating with
//! the `L^2` bracket gives bounds for every `p`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_bounds::ExactBounds;
use crate::rational::{factorial, int, to_f64, BigRational, TPolynomial};
use crate::spectral::apply_t;

/// `||T_n||_{inf,inf} = ||T_n||_{1,1} = 1/(2n)!`.
pub fn norm_inf(n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    Ok(BigRational::new(BigInt::one(), factorial(2 * n)))
}

/// Largest sampled value of `T_n 1` on an odd grid of `samples` points
/// (so `t = 0` is included).
pub fn sampled_norm_inf(n: u64, samples: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    let count = samples.max(3) | 1;
    let grid: Vec<f64> = (0..count)
        .map(|i| -1.0 + 2.0 * i as f64 / (count - 1) as f64)
        .collect();
    let values = apply_t(n, &TPolynomial::constant(int(1)), &grid, 2 * n as usize + 4)?;
    Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LpNormBounds {
    pub n: u64,
    /// `f64::INFINITY` for the sup norm.
    pub p: f64,
    /// `1/r` with `r = max(p, q)`, `1/p + 1/q = 1`; lies in `[0, 1/2]`.
    pub inv_r: f64,
    pub lower: f64,
    pub upper: f64,
    /// `sqrt(2) (2n)! alpha_0`
    pub a_n: f64,
    /// `sqrt(2) (2n)! sum_j alpha_j`
    pub b_n: f64,
}

/// Bounds on `||T_n||_{p,p}`.
///
/// The lower bound `alpha_0` holds for every `p`. The upper bound is
/// `b_n^{2/r} 2^{-1/r} / (2n)!`, which equals `1/(2n)!` at `p = 1, inf`
/// and the `L^2` bound at `p = 2`.
pub fn norm_p_bounds(n: u64, p: f64) -> Result<LpNormBounds> {
    if !(p >= 1.0) {
        return Err(Error::argument(format!("p = {p} must be at least 1")));
    }
    let bounds = ExactBounds::default().spectral_bounds(n)?;
    let fact = int(factorial(2 * n));
    let a_n = std::f64::consts::SQRT_2 * to_f64(&(&fact * &bounds.lower));
    let b_n = std::f64::consts::SQRT_2 * to_f64(&(&fact * &bounds.upper));

    let inv_p = 1.0 / p;
    let inv_r = inv_p.min(1.0 - inv_p);
    let inv_fact = to_f64(&norm_inf(n)?);
    let upper = (2.0 * inv_r * b_n.ln() - inv_r * std::f64::consts::LN_2).exp() * inv_fact;
    Ok(LpNormBounds {
        n,
        p,
        inv_r,
        lower: to_f64(&bounds.lower),
        upper,
        a_n,
        b_n,
    })
}

/// The `L^1` constant `(2n)!` next to the one implied by the DDFL identity
/// `2^{r-1} r!` at `r = 2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdflComparison {
    pub n: u64,
    pub our_bound: BigInt,
    pub ddfl_value: BigInt,
    pub ratio: BigInt,
}

pub fn ddfl_comparison(n: u64) -> Result<DdflComparison> {
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    let our_bound = factorial(2 * n);
    let power = BigInt::one() << (2 * n - 1);
    let ddfl_value = &power * &our_bound;
    Ok(DdflComparison {
        n,
        ratio: &ddfl_value / &our_bound,
        our_bound,
        ddfl_value,
    })
}
