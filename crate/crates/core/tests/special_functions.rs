use std::f64::consts::PI;

use polyqei::special::{bessel_k, digamma, ln_bessel_k, ln_gamma, q_d, trigamma, try_digamma, EULER_GAMMA};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn integer_and_half_integer_values() {
    let mut ln_fact = 0.0f64;
    let mut harmonic = 0.0f64;
    let mut zeta2_partial = 0.0f64;
    for k in 1..=150u32 {
        let x = k as f64;
        assert!(rel(ln_gamma(x), ln_fact).min((ln_gamma(x) - ln_fact).abs()) < 1e-13, "ln_gamma({x})");
        assert!((digamma(x) - (harmonic - EULER_GAMMA)).abs() < 1e-13 * (1.0 + harmonic), "digamma({x})");
        assert!(rel(trigamma(x), PI * PI / 6.0 - zeta2_partial) < 1e-12, "trigamma({x})");
        ln_fact += x.ln();
        harmonic += 1.0 / x;
        zeta2_partial += 1.0 / (x * x);
    }
    assert!(rel(digamma(0.5), -EULER_GAMMA - 2.0 * 2f64.ln()) < 1e-13);
    assert!(rel(trigamma(0.5), PI * PI / 2.0) < 1e-13);
    assert!(rel(ln_gamma(1.5), (0.5 * PI.sqrt()).ln()) < 1e-13);
}

#[test]
fn large_argument_stirling() {
    for x in [1e3f64, 1e5, 1e6] {
        let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3));
        assert!(rel(ln_gamma(x), stirling) < 1e-14, "x = {x}");
        let psi = x.ln() - 0.5 / x - 1.0 / (12.0 * x * x);
        assert!(rel(digamma(x), psi) < 1e-13, "x = {x}");
        let psi1 = 1.0 / x + 0.5 / (x * x) + 1.0 / (6.0 * x.powi(3));
        assert!(rel(trigamma(x), psi1) < 1e-12, "x = {x}");
    }
}

#[test]
fn derivative_consistency() {
    let h = 1e-4;
    for x in [0.5f64, 0.8, 1.3, 2.0, 5.5, 17.0, 120.0] {
        let fd = (ln_gamma(x + h) - ln_gamma(x - h)) / (2.0 * h);
        assert!((fd - digamma(x)).abs() < 1e-6, "digamma at {x}");
        let fd2 = (digamma(x + h) - digamma(x - h)) / (2.0 * h);
        assert!((fd2 - trigamma(x)).abs() < 1e-6, "trigamma at {x}");
    }
    assert!(try_digamma(0.0).is_err());
    assert!(try_digamma(-1.5).is_err());
}

/// `K_2` from the small-argument series (A&S 9.6.11 with n = 2), 50 terms.
fn k2_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let psi = |m: u32| -EULER_GAMMA + (1..m).map(|j| 1.0 / j as f64).sum::<f64>();
    let mut i2 = 0.0;
    let mut rest = 0.0;
    let mut term = 1.0 / 2.0; // q^k / (k! (k+2)!) at k = 0
    for k in 0..50u32 {
        i2 += term;
        rest += (psi(k + 1) + psi(k + 3)) * term;
        term *= q / ((k as f64 + 1.0) * (k as f64 + 3.0));
    }
    let half = 0.5 * z;
    2.0 / (z * z) - 0.5 - (half).ln() * half * half * i2 + 0.5 * half * half * rest
}

/// `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt`, trapezoid rule
/// (exponentially convergent for this integrand).
fn k_integral(nu: u32, x: f64) -> f64 {
    let step = 0.01;
    let mut sum = 0.5 * (-x).exp();
    let mut t: f64 = step;
    loop {
        let v = (-x * t.cosh()).exp() * (nu as f64 * t).cosh();
        sum += v;
        if v < 1e-300 || v < 1e-18 * sum {
            break;
        }
        t += step;
    }
    sum * step
}

#[test]
fn k2_small_argument_series_oracle() {
    for z in [0.1f64, 0.5, 1.0, 1.5] {
        assert!(rel(bessel_k(2, z).unwrap(), k2_series(z)) < 1e-13, "z = {z}");
    }
    assert!(rel(bessel_k(2, 1.0).unwrap(), 1.624_838_898_635_177_4) < 1e-13);
}

#[test]
fn integral_representation_oracle() {
    for nu in 0..=2 {
        for x in [0.1f64, 0.5, 1.0, 2.0, 3.5, 10.0, 30.0] {
            assert!(rel(bessel_k(nu, x).unwrap(), k_integral(nu, x)) < 1e-12, "K_{nu}({x})");
        }
    }
}

#[test]
fn large_argument_expansion() {
    // K_nu(x) ~ sqrt(pi / 2x) e^{-x} sum_k a_k(nu) / x^k
    for nu in 0..=2u32 {
        let mu = 4.0 * (nu * nu) as f64;
        for x in [50.0f64, 80.0, 200.0, 700.0] {
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..=12 {
                let odd = (2 * k - 1) as f64;
                term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
                sum += term;
            }
            let ln_want = 0.5 * (PI / (2.0 * x)).ln() - x + sum.ln();
            assert!((ln_bessel_k(nu, x).unwrap() - ln_want).abs() < 1e-12, "K_{nu}({x})");
        }
    }
    // K_2 x^2 e^x against sqrt(pi x^3 / 2) (1 + 15/(8x) + 105/(128x^2) - ...)
    let x = 60.0f64;
    let lhs = bessel_k(2, x).unwrap() * x * x * x.exp();
    let rhs = (PI * x.powi(3) / 2.0).sqrt() * (1.0 + 15.0 / (8.0 * x) + 105.0 / (128.0 * x * x) - 315.0 / (1024.0 * x.powi(3)));
    assert!(rel(lhs, rhs) < 1e-7);
}

#[test]
fn recurrence_positive_decreasing() {
    for x in [0.1f64, 1.0, 10.0] {
        let k0 = bessel_k(0, x).unwrap();
        let k1 = bessel_k(1, x).unwrap();
        let k2 = bessel_k(2, x).unwrap();
        assert!(rel(k2, k0 + 2.0 * k1 / x) < 1e-12);
    }
    for nu in 0..=2 {
        let mut previous = f64::INFINITY;
        for i in 1..=400 {
            let v = bessel_k(nu, 0.05 * i as f64).unwrap();
            assert!(v > 0.0 && v < previous, "K_{nu} at {}", 0.05 * i as f64);
            previous = v;
        }
    }
    assert!(bessel_k(3, 1.0).is_err());
    assert!(bessel_k(0, 0.0).is_err());
}

#[test]
fn q_d_closed_forms() {
    for i in 0..=100 {
        let x = 10f64.powf(3.0 * i as f64 / 100.0);
        let q2 = (x.acosh() + x * (x * x - 1.0).sqrt()) / (x * x);
        assert!((q_d(2, x).unwrap().value - q2).abs() < 1e-10, "Q_2({x})");
        let q5 = 1.0 - 5.0 / (3.0 * x * x) + 2.0 / (3.0 * x.powi(5));
        assert!((q_d(5, x).unwrap().value - q5).abs() < 1e-10, "Q_5({x})");
    }
    assert!((q_d(3, 2.0).unwrap().value - 7.0 / 8.0).abs() < 1e-12);
    assert!(q_d(1, 2.0).is_err());
    assert!(q_d(3, 0.9).is_err());
}

#[test]
fn q_d_approaches_supremum() {
    for d in 3..=8u32 {
        let mut previous = 0.0;
        for i in 0..=40 {
            let x = 10f64.powf(0.1 * i as f64);
            let v = q_d(d, x).unwrap().value;
            assert!(v >= previous && v < 1.0, "Q_{d}({x})");
            previous = v;
        }
        assert!(previous > 0.99);
    }
    let peak = q_d(2, 1.8).unwrap().value;
    assert!(peak > 1.199 && peak < 1.2);
    assert!((q_d(2, 1e4).unwrap().value - 1.0).abs() < 1e-6);
}
