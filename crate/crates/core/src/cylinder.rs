//! Ground-state energy density of the massive scalar field on the
//! four-dimensional cylinder `R^3 x S^1` of circumference `L`:
//!
//! `<T_tt> = -sum_{k>=1} m^2 K_2(m k L) / (2 pi^2 (k L)^2)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qei::optimize_n;
use crate::special::ln_bessel_k;

pub const DEFAULT_REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CylinderResult {
    pub m: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub tau0: f64,
    /// Negative; may underflow to `-0.0`, see `ln_magnitude`.
    pub energy_density: f64,
    /// `ln |<T_tt>|`, finite even when the value itself underflows.
    pub ln_magnitude: f64,
    pub terms_used: usize,
    /// `-m^4 e^{-mL} / ((2 pi)^{3/2} (mL)^{5/2})`.
    pub asymptotic: f64,
    /// Set when the series underflowed and only the asymptotic form is
    /// reported.
    pub asymptotic_only: bool,
    pub qei_bound: Option<f64>,
    pub n_star: Option<u64>,
    /// `|<T_tt>| / Q(m, tau0)`.
    pub ratio: Option<f64>,
    pub ln_ratio: Option<f64>,
}

fn check(m: f64, l: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::argument(format!("mass m = {m} must be positive")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::argument(format!("length L = {l} must be positive")));
    }
    Ok(())
}

/// `ln` of the leading asymptote magnitude `m^4 e^{-mL} / ((2 pi)^{3/2} (mL)^{5/2})`.
pub fn ln_asymptotic_magnitude(m: f64, l: f64) -> f64 {
    let ml = m * l;
    4.0 * m.ln() - ml - 1.5 * (2.0 * PI).ln() - 2.5 * ml.ln()
}

/// `ln` of term `k`: `m^4 K_2(k m L) / (2 pi^2 (k m L)^2)`.
fn ln_term(m: f64, l: f64, k: usize) -> Result<f64> {
    let y = k as f64 * m * l;
    Ok(4.0 * m.ln() + ln_bessel_k(2, y)? - (2.0 * PI * PI).ln() - 2.0 * y.ln())
}

/// Sums the series until the next term falls below `rel_tol` times the
/// running total. Terms are formed in log space relative to the first and
/// accumulated with Neumaier summation.
pub fn energy_density(m: f64, l: f64, rel_tol: f64) -> Result<CylinderResult> {
    check(m, l)?;
    if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
        return Err(Error::argument(format!("rel_tol = {rel_tol} must lie in (0, 1e-3]")));
    }
    let ln_asym = ln_asymptotic_magnitude(m, l);
    let ln_first = ln_term(m, l, 1)?;

    let mut sum = 1.0f64;
    let mut carry = 0.0f64;
    let mut terms = 1;
    loop {
        let rel = (ln_term(m, l, terms + 1)? - ln_first).exp();
        if rel < rel_tol * (sum + carry) {
            break;
        }
        let t = sum + rel;
        carry += if sum.abs() >= rel.abs() { (sum - t) + rel } else { (rel - t) + sum };
        sum = t;
        terms += 1;
        if terms > 1_000_000 {
            return Err(Error::Convergence {
                message: format!("cylinder series at mL = {} did not settle", m * l),
                best: -(ln_first + (sum + carry).ln()).exp(),
            });
        }
    }
    let ln_magnitude = ln_first + (sum + carry).ln();
    let asymptotic_only = ln_magnitude < f64::MIN_POSITIVE.ln();
    let ln_magnitude = if asymptotic_only { ln_asym } else { ln_magnitude };

    Ok(CylinderResult {
        m,
        l,
        tau0: l,
        energy_density: -ln_magnitude.exp(),
        ln_magnitude,
        terms_used: terms,
        asymptotic: -ln_asym.exp(),
        asymptotic_only,
        qei_bound: None,
        n_star: None,
        ratio: None,
        ln_ratio: None,
    })
}

/// Compares the energy density with the four-dimensional bound at
/// averaging time `tau0 = L`.
pub fn compare_to_qei(m: f64, l: f64) -> Result<CylinderResult> {
    compare_to_qei_with_tau0(m, l, l)
}

/// As [`compare_to_qei`] with an averaging time `tau0 <= L`.
pub fn compare_to_qei_with_tau0(m: f64, l: f64, tau0: f64) -> Result<CylinderResult> {
    check(m, l)?;
    if !(tau0 > 0.0 && tau0 <= l) {
        return Err(Error::argument(format!("tau0 = {tau0} must lie in (0, L = {l}]")));
    }
    let mut result = energy_density(m, l, DEFAULT_REL_TOL)?;
    let bound = optimize_n(4, m, tau0)?;
    let ln_ratio = result.ln_magnitude - bound.ln_bound;
    result.tau0 = tau0;
    result.qei_bound = Some(bound.bound);
    result.n_star = Some(bound.n_star);
    result.ratio = Some(ln_ratio.exp());
    result.ln_ratio = Some(ln_ratio);
    Ok(result)
}
