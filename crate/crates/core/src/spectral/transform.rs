//! Quadrature evaluation of `T_n f`, and the Fourier-tail functional
//! `H_{d,h}(x)` for the test functions `h = (1 - t^2)^n`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::rational::{factorial, int, to_f64, TPolynomial};

use super::kernel::{GreenKernel, KernelEvaluator};
use super::nystrom::DEFAULT_PRECISION_BITS;

/// `(T_n f)(t)` at each sample point.
///
/// The integral is split at `s = t`, where the kernel changes piece; on
/// each side the integrand is a polynomial, so a rule with `quad_order`
/// nodes is exact once `2 quad_order > 2n + deg f`.
pub fn apply_t(n: u64, f: &TPolynomial, samples: &[f64], quad_order: usize) -> Result<Vec<f64>> {
    let kernel = GreenKernel::new(n)?;
    let evaluator = KernelEvaluator::new(&kernel, DEFAULT_PRECISION_BITS)?;
    let deg = f.degree().unwrap_or(0);
    let order = quad_order.max(n as usize + deg / 2 + 1);
    let rule = GaussLegendre::new(order);
    let coeffs: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
    let f_at = |s: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c);

    samples
        .iter()
        .map(|&t| {
            if !(-1.0..=1.0).contains(&t) {
                return Err(Error::domain(format!("sample point {t} outside [-1, 1]")));
            }
            // G(t, s) = G(s, t): with t as the source point, s <= t is the
            // left piece and s >= t the right piece.
            let (left, right) = evaluator.source_coeffs(&evaluator.fixed_point(t));
            let below: f64 = rule
                .mapped(-1.0, t)
                .map(|(s, w)| w * evaluator.eval_poly(&left, &evaluator.fixed_point(s)) * f_at(s))
                .sum();
            let above: f64 = rule
                .mapped(t, 1.0)
                .map(|(s, w)| w * evaluator.eval_poly(&right, &evaluator.fixed_point(s)) * f_at(s))
                .sum();
            Ok((below + above) / evaluator.scale())
        })
        .collect()
}

/// Fourier transform `int e^{-iyt} (1 - t^2)^n dt` of the even test
/// function, by panelled Gauss–Legendre on `[0, 1]`.
pub fn h_hat(n: u64, y: f64, rule: &GaussLegendre) -> f64 {
    let panels = (y.abs() / 4.0).ceil().max(1.0) as usize;
    let width = 1.0 / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        total += rule.integrate(a, a + width, |t| (y * t).cos() * (1.0 - t * t).powi(n as i32));
    }
    2.0 * total
}

/// `int_a^b y^d |h_hat(y)|^2 dy / pi` on unit-width panels.
fn weighted_power(d: u32, n: u64, a: f64, b: f64, rule: &GaussLegendre) -> f64 {
    let panels = (b - a).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * width;
            rule.integrate(lo, lo + width, |y| {
                let v = h_hat(n, y, rule);
                y.powi(d as i32) * v * v
            })
        })
        .sum::<f64>()
        / PI
}

/// Oscillation-averaged tail `int_Y^inf y^d |h_hat|^2 dy / pi`, from the
/// leading boundary terms `|h_hat(y)| ~ 2^{n+1} n! |cos or sin| / y^{n+1}`.
fn tail_estimate(d: u32, n: u64, cutoff: f64) -> f64 {
    let amp = 2f64.powi(n as i32) * to_f64(&int(factorial(n)));
    let power = 2.0 * n as f64 + 1.0 - d as f64;
    2.0 * amp * amp * cutoff.powf(-power) / (power * PI)
}

/// `||h||^2` for `h = (1 - t^2)^n`, exact.
pub fn h_norm_squared(n: u64) -> f64 {
    let h2 = TPolynomial::one_minus_t2_pow(2 * n);
    to_f64(&h2.integrate(&int(-1), &int(1)))
}

/// `H_{d,h}(x)` for `h = (1 - t^2)^n`: the weighted Fourier tail beyond
/// `x` over `||h||^2`.
///
/// The integral is computed directly up to a cutoff and completed with the
/// averaged asymptotic tail; the cutoff is then doubled and the two
/// answers must agree to `1e-4` relative.
pub fn empirical_h(d: u32, n: u64, x: f64, quad_order: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::argument(format!("d = {d} must be at least 2")));
    }
    if 2 * n < d as u64 {
        return Err(Error::argument(format!("need n >= d/2, got n = {n}, d = {d}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("x = {x} must be positive")));
    }
    let rule = GaussLegendre::new(quad_order.max(2 * n as usize + 8));
    let norm = h_norm_squared(n);
    let cutoff = (16.0 * x).max(200.0);

    // |h_hat|^2 oscillates with period pi; averaging cutoffs Y and Y + pi/2
    // cancels the leading oscillatory error of the averaged tail.
    let quarter = 0.5 * PI;
    let estimate = |head: f64, y: f64| {
        let extra = weighted_power(d, n, y, y + quarter, &rule);
        head + 0.5 * (tail_estimate(d, n, y) + extra + tail_estimate(d, n, y + quarter))
    };
    let head = weighted_power(d, n, x, cutoff, &rule);
    let coarse = estimate(head, cutoff);
    let head2 = head + weighted_power(d, n, cutoff, 2.0 * cutoff, &rule);
    let fine = estimate(head2, 2.0 * cutoff);
    let change = ((fine - coarse) / fine).abs();
    if change > 1e-4 {
        return Err(Error::Convergence {
            message: format!("Fourier tail unstable: cutoffs {cutoff} and {} differ by {change:e}", 2.0 * cutoff),
            best: fine / norm,
        });
    }
    Ok(fine / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_of_parabola() {
        // int (1 - t^2) e^{-iyt} dt = 4 (sin y - y cos y) / y^3
        let rule = GaussLegendre::new(16);
        for &y in &[0.5f64, 3.0, 17.0, 101.0] {
            let exact = 4.0 * (y.sin() - y * y.cos()) / (y * y * y);
            assert!((h_hat(1, y, &rule) - exact).abs() < 1e-13, "y = {y}");
        }
        assert!((h_hat(1, 0.0, &rule) - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn norms() {
        assert!((h_norm_squared(1) - 16.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn argument_checks() {
        assert!(empirical_h(4, 1, 1.0, 16).is_err());
        assert!(empirical_h(2, 1, 0.0, 16).is_err());
        assert!(apply_t(1, &TPolynomial::constant(int(1)), &[1.5], 8).is_err());
    }
}
