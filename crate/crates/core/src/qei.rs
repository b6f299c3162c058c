//! Energy-density lower bounds for a massive scalar field averaged over a
//! proper-time interval of length `tau0`.
//!
//! At fixed `n >= d/2` the bound is `C_{d,n} m^d / (m tau0)^{2n}`. With
//! `x = m tau0 / 2` this is `(2^d K'_d / tau0^d) exp(F(n))` where
//! `F(n) = (d - 2n) ln x + ln(2 Gamma(n+1) Gamma(2n+1/2) / Gamma(n+1/2))`;
//! minimising over integer `n` gives `Q(m, tau0)`, which decays like
//! `e^{-m tau0 / 2}`. All evaluation is in log space.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_bounds::{inverse_alpha0_exact, ln_inverse_alpha0, DEFAULT_MAX_N};
use crate::rational::to_f64;
use crate::special::{digamma, ln_gamma, trigamma};

/// Below this `x` the large-`x` asymptote is not trusted.
pub const ASYMPTOTIC_REGIME_X: f64 = 5.0;

fn check_dimension(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::argument(format!("spacetime dimension d = {d} must be at least 2")));
    }
    Ok(())
}

/// `ln A_k`, the log-area of the unit `k`-sphere `2 pi^{(k+1)/2} / Gamma((k+1)/2)`.
fn ln_sphere_area(k: u32) -> f64 {
    let h = 0.5 * (k as f64 + 1.0);
    std::f64::consts::LN_2 + h * PI.ln() - ln_gamma(h)
}

/// `K_d = A_{d-2} / (2d (2 pi)^{d-1})`.
pub fn k_d(d: u32) -> Result<f64> {
    check_dimension(d)?;
    let ln = ln_sphere_area(d - 2) - (2.0 * d as f64).ln() - (d as f64 - 1.0) * (2.0 * PI).ln();
    Ok(ln.exp())
}

/// `K'_d`: equal to `K_d` except `K'_2 = 6 K_2 / 5`, absorbing `sup Q_2 < 6/5`.
pub fn k_d_prime(d: u32) -> Result<f64> {
    let k = k_d(d)?;
    Ok(if d == 2 { 1.2 * k } else { k })
}

fn min_order(d: u32) -> u64 {
    (d as u64).div_ceil(2)
}

fn check_order(d: u32, n: u64) -> Result<()> {
    check_dimension(d)?;
    if n < min_order(d) {
        return Err(Error::argument(format!("n = {n} is below d/2 for d = {d}")));
    }
    Ok(())
}

fn check_physical(m: f64, tau0: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::argument(format!("mass m = {m} must be positive")));
    }
    if !(tau0 > 0.0 && tau0.is_finite()) {
        return Err(Error::argument(format!("duration tau0 = {tau0} must be positive")));
    }
    Ok(())
}

/// `ln C_{d,n}` with `C_{d,n} = K'_d 2^{2n+1} Gamma(n+1) Gamma(2n+1/2) / Gamma(n+1/2)`.
pub fn ln_c_dn(d: u32, n: u64) -> Result<f64> {
    check_order(d, n)?;
    Ok(k_d_prime(d)?.ln() + 2.0 * n as f64 * std::f64::consts::LN_2 + ln_inverse_alpha0(n as f64))
}

pub fn c_dn(d: u32, n: u64) -> Result<f64> {
    Ok(ln_c_dn(d, n)?.exp())
}

/// `ln [C_{d,n} m^d / (m tau0)^{2n}]`.
pub fn ln_bound_at_n(d: u32, m: f64, tau0: f64, n: u64) -> Result<f64> {
    check_physical(m, tau0)?;
    Ok(ln_c_dn(d, n)? + d as f64 * m.ln() - 2.0 * n as f64 * (m * tau0).ln())
}

pub fn bound_at_n(d: u32, m: f64, tau0: f64, n: u64) -> Result<f64> {
    Ok(ln_bound_at_n(d, m, tau0, n)?.exp())
}

/// The same bound assembled as `(2^d K'_d / tau0^d) x^{d-2n} / alpha_0(n)`,
/// using the exact `alpha_0` where it is available.
pub fn ln_bound_composed(d: u32, m: f64, tau0: f64, n: u64) -> Result<f64> {
    check_order(d, n)?;
    check_physical(m, tau0)?;
    let x = 0.5 * m * tau0;
    let ln_inv_alpha0 = if n <= DEFAULT_MAX_N {
        to_f64(&inverse_alpha0_exact(n)).ln()
    } else {
        ln_inverse_alpha0(n as f64)
    };
    Ok(d as f64 * std::f64::consts::LN_2 + k_d_prime(d)?.ln() - d as f64 * tau0.ln()
        + (d as f64 - 2.0 * n as f64) * x.ln()
        + ln_inv_alpha0)
}

/// `F'(n) = -2 ln x + Psi(n+1) + 2 Psi(2n+1/2) - Psi(n+1/2)`.
pub fn f_prime(n: f64, x: f64) -> f64 {
    -2.0 * x.ln() + digamma(n + 1.0) + 2.0 * digamma(2.0 * n + 0.5) - digamma(n + 0.5)
}

/// `F''(n) = psi_1(n+1) + 4 psi_1(2n+1/2) - psi_1(n+1/2)`.
pub fn f_second(n: f64) -> f64 {
    trigamma(n + 1.0) + 4.0 * trigamma(2.0 * n + 0.5) - trigamma(n + 0.5)
}

/// Real critical point of `F`, by Newton's method from `n = x/2` inside a
/// bisection bracket.
pub fn critical_n(x: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::domain(format!("critical_n needs x > 1, got {x}")));
    }
    // F' < 0 at n = 0 whenever x > 1.
    let mut lo = 0.0;
    let mut hi = x.max(1.0);
    while f_prime(hi, x) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut n = (0.5 * x).clamp(lo, hi);
    for _ in 0..100 {
        let g = f_prime(n, x);
        if g < 0.0 {
            lo = n;
        } else {
            hi = n;
        }
        let mut next = n - g / f_second(n);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - n).abs() <= 1e-10 * n.abs().max(1e-3) {
            return Ok(next);
        }
        n = next;
    }
    Err(Error::Convergence {
        message: format!("Newton iteration for the critical n at x = {x} did not converge"),
        best: n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QeiBound {
    pub d: u32,
    pub m: f64,
    pub tau0: f64,
    pub x: f64,
    pub n_star: u64,
    /// Real critical point, when `x > d/2`.
    pub n_critical: Option<f64>,
    pub bound: f64,
    pub ln_bound: f64,
    /// `sqrt(2 pi) K'_d m^d (m tau0)^{1/2} e^{-m tau0 / 2}`.
    pub asymptotic: f64,
}

/// Minimises the fixed-`n` bound over integers `n >= ceil(d/2)`.
///
/// For `x <= d/2` the smallest admissible `n` wins. Otherwise the integers
/// within two of the real critical point are scanned together with
/// `ceil(d/2)`; `F` is convex there, so this window holds the minimum.
pub fn optimize_n(d: u32, m: f64, tau0: f64) -> Result<QeiBound> {
    check_dimension(d)?;
    check_physical(m, tau0)?;
    let x = 0.5 * m * tau0;
    let n_min = min_order(d);

    let (n_star, ln_bound, n_critical) = if x <= d as f64 / 2.0 {
        (n_min, ln_bound_at_n(d, m, tau0, n_min)?, None)
    } else {
        let n0 = critical_n(x)?;
        let lo = ((n0.floor() as i64) - 2).max(n_min as i64) as u64;
        let hi = ((n0.ceil() as i64) + 2).max(n_min as i64) as u64;
        let mut best = (n_min, ln_bound_at_n(d, m, tau0, n_min)?);
        for n in lo..=hi {
            let v = ln_bound_at_n(d, m, tau0, n)?;
            if v < best.1 {
                best = (n, v);
            }
        }
        (best.0, best.1, Some(n0))
    };

    Ok(QeiBound {
        d,
        m,
        tau0,
        x,
        n_star,
        n_critical,
        bound: ln_bound.exp(),
        ln_bound,
        asymptotic: ln_asymptotic(d, m, tau0)?.exp(),
    })
}

/// `ln [sqrt(2 pi) K'_d m^d (m tau0)^{1/2} e^{-m tau0 / 2}]`.
pub fn ln_asymptotic(d: u32, m: f64, tau0: f64) -> Result<f64> {
    check_physical(m, tau0)?;
    let mt = m * tau0;
    Ok(0.5 * (2.0 * PI).ln() + k_d_prime(d)?.ln() + d as f64 * m.ln() + 0.5 * mt.ln() - 0.5 * mt)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticBound {
    pub value: f64,
    pub ln_value: f64,
    /// Set when `x = m tau0 / 2` is below the asymptotic regime.
    pub warning: Option<String>,
}

/// Large-`x` form of `Q(m, tau0)`: the prefactor `2^d K'_d / tau0^d`
/// times `2 sqrt(pi) x^{d+1/2} e^{-x}`.
pub fn asymptotic_bound(d: u32, m: f64, tau0: f64) -> Result<AsymptoticBound> {
    let ln_value = ln_asymptotic(d, m, tau0)?;
    let x = 0.5 * m * tau0;
    let warning = (x < ASYMPTOTIC_REGIME_X)
        .then(|| format!("x = {x} is below {ASYMPTOTIC_REGIME_X}; the asymptotic regime is not reached"));
    Ok(AsymptoticBound {
        value: ln_value.exp(),
        ln_value,
        warning,
    })
}

/// The three leading constants that appear for `Q(m, tau0)` in the
/// literature, side by side; only `composed` is checked against the
/// optimised bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticVariants {
    /// `sqrt(2 pi) K'_d m^d (m tau0)^{1/2} e^{-m tau0/2}`
    pub composed: f64,
    /// `K'_d 2^{d+1} sqrt(pi) m^d (m tau0)^{1/2} e^{-m tau0/2}`
    pub introduction: f64,
    /// `K'_d m^d (m tau0)^{1/2} e^{-m tau0/2}`, the cylinder-example form
    pub cylinder: f64,
}

pub fn asymptotic_variants(d: u32, m: f64, tau0: f64) -> Result<AsymptoticVariants> {
    let composed_ln = ln_asymptotic(d, m, tau0)?;
    let base_ln = composed_ln - 0.5 * (2.0 * PI).ln();
    Ok(AsymptoticVariants {
        composed: composed_ln.exp(),
        introduction: (base_ln + (d as f64 + 1.0) * std::f64::consts::LN_2 + 0.5 * PI.ln()).exp(),
        cylinder: base_ln.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn constants() {
        assert!(rel(k_d(4).unwrap(), 1.0 / (16.0 * PI * PI)) < 1e-14);
        assert!(rel(k_d(2).unwrap(), 1.0 / (4.0 * PI)) < 1e-14);
        assert!(rel(k_d_prime(2).unwrap(), 3.0 / (10.0 * PI)) < 1e-14);
        assert!(rel(k_d(3).unwrap(), 1.0 / (12.0 * PI)) < 1e-14);
        assert_eq!(k_d(5).unwrap(), k_d_prime(5).unwrap());
        assert!(k_d(1).is_err());
    }

    #[test]
    fn c_dn_values() {
        // K'_2 * 8 * Gamma(2) Gamma(5/2) / Gamma(3/2) = (3 / 10 pi) * 12
        assert!(rel(c_dn(2, 1).unwrap(), 18.0 / (5.0 * PI)) < 1e-13);
        // K'_4 * 32 * Gamma(3) Gamma(9/2) / Gamma(5/2) = (1 / 16 pi^2) * 32 * 2 * 35/4
        assert!(rel(c_dn(4, 2).unwrap(), 35.0 / (PI * PI)) < 1e-13);
        assert!(c_dn(4, 1).is_err());
    }

    #[test]
    fn fixed_n_at_unit_product() {
        let c = c_dn(4, 2).unwrap();
        assert!(rel(bound_at_n(4, 3.0, 1.0 / 3.0, 2).unwrap(), c * 81.0) < 1e-13);
    }

    #[test]
    fn critical_point_equation() {
        for &x in &[1.5, 3.0, 20.0, 200.0] {
            let n = critical_n(x).unwrap();
            assert!(f_prime(n, x).abs() < 1e-9, "x = {x}");
        }
        assert!(critical_n(1.0).is_err());
    }

    #[test]
    fn boundary_regime() {
        let b = optimize_n(4, 1.0, 3.0).unwrap();
        assert_eq!(b.n_star, 2);
        assert!(b.n_critical.is_none());
        let b = optimize_n(3, 2.0, 0.5).unwrap();
        assert_eq!(b.n_star, 2);
    }

    #[test]
    fn asymptote_warning() {
        assert!(asymptotic_bound(4, 1.0, 4.0).unwrap().warning.is_some());
        assert!(asymptotic_bound(4, 1.0, 40.0).unwrap().warning.is_none());
        let a = asymptotic_bound(4, 1.0, 100.0).unwrap();
        assert!(a.value > 0.0 && a.value.is_finite());
        assert!((a.ln_value - (-50.0 + 0.5 * 100f64.ln() + 0.5 * (2.0 * PI).ln() - (16.0 * PI * PI).ln())).abs() < 1e-12);
    }
}
