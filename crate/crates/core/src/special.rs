//! Floating-point special functions: log-gamma, digamma, trigamma, the
//! modified Bessel functions `K_0`, `K_1`, `K_2`, and the `Q_d` weight of
//! the massive-field energy inequality.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SHIFT: f64 = 8.0;

// B_{2k} / (2k (2k-1))
const LN_GAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k)
const DIGAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

// B_{2k}
const TRIGAMMA_SERIES: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Evaluates `sum_k c_k y^k` for `y = 1/x^2`, highest power first.
fn even_series(coeffs: &[f64], inv_x2: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * inv_x2 + c)
}

fn positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} requires a positive finite argument, got {x}")))
    }
}

/// `ln Gamma(x)` for `x > 0`; NaN otherwise.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    let mut z = x;
    let mut log_prod = 0.0;
    // Accumulate the shift product in chunks to stay in range.
    let mut prod = 1.0;
    while z < SHIFT {
        prod *= z;
        z += 1.0;
        if prod > 1e200 || prod < 1e-200 {
            log_prod += prod.ln();
            prod = 1.0;
        }
    }
    log_prod += prod.ln();
    let inv = 1.0 / z;
    let series = inv * even_series(&LN_GAMMA_SERIES, inv * inv);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - log_prod
}

/// Digamma `Psi(x) = d/dx ln Gamma(x)` for `x > 0`; NaN otherwise.
pub fn digamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    let mut z = x;
    let mut acc = 0.0;
    while z < SHIFT {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    acc + z.ln() - 0.5 / z - inv2 * even_series(&DIGAMMA_SERIES, inv2)
}

/// Trigamma `psi_1(x) = d^2/dx^2 ln Gamma(x)` for `x > 0`; NaN otherwise.
pub fn trigamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    let mut z = x;
    let mut acc = 0.0;
    while z < SHIFT {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    acc + inv + 0.5 * inv2 + inv * inv2 * even_series(&TRIGAMMA_SERIES, inv2)
}

pub fn try_ln_gamma(x: f64) -> Result<f64> {
    positive(x, "ln_gamma")?;
    Ok(ln_gamma(x))
}

pub fn try_digamma(x: f64) -> Result<f64> {
    positive(x, "digamma")?;
    Ok(digamma(x))
}

pub fn try_trigamma(x: f64) -> Result<f64> {
    positive(x, "trigamma")?;
    Ok(trigamma(x))
}

const SERIES_SWITCH: f64 = 2.0;

/// `(K_0(x), K_1(x))` from the power series about the origin.
fn bessel_k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // I_0, I_1 and the digamma-weighted sums.
    let mut i0 = 0.0;
    let mut i1 = 0.0;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    // term0 = y^k / (k!)^2, term1 = y^k / (k! (k+1)!)
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut harmonic = 0.0; // H_k
    for k in 0..200 {
        let kf = k as f64;
        if k > 0 {
            term0 *= y / (kf * kf);
            term1 *= y / (kf * (kf + 1.0));
            harmonic += 1.0 / kf;
        }
        let psi_k1 = -EULER_GAMMA + harmonic; // Psi(k+1)
        let psi_k2 = psi_k1 + 1.0 / (kf + 1.0); // Psi(k+2)
        i0 += term0;
        i1 += term1;
        s0 += psi_k1 * term0;
        s1 += (psi_k1 + psi_k2) * term1;
        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1 {
            break;
        }
    }
    let i1 = 0.5 * x * i1;
    let k0 = -log_half * i0 + s0;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
    (k0, k1)
}

/// `(e^x K_0(x), e^x K_1(x))` by Steed's continued fraction, for `x >= 2`.
fn bessel_k01_scaled_cf(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn check_bessel(order: u32, x: f64) -> Result<()> {
    if order > 2 {
        return Err(Error::argument(format!("bessel_k supports orders 0, 1, 2; got {order}")));
    }
    positive(x, "bessel_k")
}

/// `e^x K_order(x)`, finite for every positive `x`.
pub fn bessel_k_scaled(order: u32, x: f64) -> Result<f64> {
    check_bessel(order, x)?;
    let (k0, k1) = if x < SERIES_SWITCH {
        let (k0, k1) = bessel_k01_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        bessel_k01_scaled_cf(x)
    };
    Ok(match order {
        0 => k0,
        1 => k1,
        _ => k0 + 2.0 * k1 / x,
    })
}

/// Modified Bessel function of the second kind, `K_order(x)`, orders 0–2.
/// `K_2` comes from the recurrence `K_2 = K_0 + 2 K_1 / x`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    check_bessel(order, x)?;
    if x < SERIES_SWITCH {
        let (k0, k1) = bessel_k01_series(x);
        return Ok(match order {
            0 => k0,
            1 => k1,
            _ => k0 + 2.0 * k1 / x,
        });
    }
    Ok(bessel_k_scaled(order, x)? * (-x).exp())
}

/// `ln K_order(x)`, usable where `K` itself underflows.
pub fn ln_bessel_k(order: u32, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(order, x)?.ln() - x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QdValue {
    pub d: u32,
    pub x: f64,
    pub value: f64,
}

/// `Q_d(x) = d x^{-d} int_1^x y^2 (y^2 - 1)^{(d-3)/2} dy`.
///
/// With `y = cosh u` the integrand becomes `cosh^2 u sinh^{d-2} u`, which is
/// smooth at the lower endpoint for every `d >= 2`.
pub fn q_d(d: u32, x: f64) -> Result<QdValue> {
    if d < 2 {
        return Err(Error::domain(format!("Q_d needs d >= 2, got {d}")));
    }
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::domain(format!("Q_d needs finite x >= 1, got {x}")));
    }
    if x == 1.0 {
        return Ok(QdValue { d, x, value: 0.0 });
    }
    let upper = x.acosh();
    let p = d as i32 - 2;
    let integrand = |u: f64| {
        let c = u.cosh();
        c * c * u.sinh().powi(p)
    };
    // The integral is about x^d / d, so this keeps |error in Q_d| near 1e-12.
    let scale = x.powi(d as i32) / d as f64;
    let integral = integrate_adaptive(integrand, 0.0, upper, 1e-12 * scale, 1e-14)?;
    Ok(QdValue {
        d,
        x,
        value: d as f64 * integral / x.powi(d as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn standard_values() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        assert!(rel(trigamma(1.0), PI * PI / 6.0) < 1e-13);
        assert!(rel(ln_gamma(0.5), 0.5 * PI.ln()) < 1e-13);
        assert!(rel(ln_gamma(10.0), 362_880f64.ln()) < 1e-14);
        assert!(rel(digamma(0.5), -EULER_GAMMA - 2.0 * 2f64.ln()) < 1e-13);
        assert!(rel(trigamma(0.5), PI * PI / 2.0) < 1e-13);
    }

    #[test]
    fn large_arguments() {
        // ln Gamma(1e6) via Stirling with two correction terms as reference
        let x = 1e6_f64;
        let reference = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x);
        assert!(rel(ln_gamma(x), reference) < 1e-15);
        assert!(rel(digamma(x), x.ln() - 0.5 / x - 1.0 / (12.0 * x * x)) < 1e-15);
        assert!(rel(trigamma(x), 1.0 / x + 0.5 / (x * x)) < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(try_ln_gamma(0.0).is_err());
        assert!(try_digamma(-1.0).is_err());
        assert!(try_trigamma(f64::NAN).is_err());
        assert!(ln_gamma(-2.0).is_nan());
        assert!(bessel_k(0, 0.0).is_err());
        assert!(matches!(bessel_k(3, 1.0), Err(Error::Argument(_))));
        assert!(q_d(1, 2.0).is_err());
        assert!(q_d(3, 0.5).is_err());
    }

    #[test]
    fn bessel_reference_values() {
        assert!(rel(bessel_k(0, 1.0).unwrap(), 0.421_024_438_240_708_3) < 1e-14);
        assert!(rel(bessel_k(1, 1.0).unwrap(), 0.601_907_230_197_234_6) < 1e-14);
        assert!(rel(bessel_k(2, 1.0).unwrap(), 1.624_838_898_635_177_4) < 1e-14);
        assert!(rel(bessel_k(0, 2.0).unwrap(), 0.113_893_872_749_533_4) < 1e-13);
        assert!(rel(bessel_k(1, 2.0).unwrap(), 0.139_865_881_816_522_4) < 1e-13);
    }

    #[test]
    fn series_and_continued_fraction_overlap() {
        for &x in &[1.5, 1.8, 2.0, 2.5, 3.0] {
            let (s0, s1) = bessel_k01_series(x);
            let (c0, c1) = bessel_k01_scaled_cf(x);
            let e = (-x).exp();
            assert!(rel(s0, c0 * e) < 1e-10, "K0 at {x}");
            assert!(rel(s1, c1 * e) < 1e-10, "K1 at {x}");
        }
    }

    #[test]
    fn q_d_basic() {
        assert_eq!(q_d(4, 1.0).unwrap().value, 0.0);
        assert!((q_d(3, 2.0).unwrap().value - 7.0 / 8.0).abs() < 1e-10);
    }
}
