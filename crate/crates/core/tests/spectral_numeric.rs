use std::f64::consts::PI;

use polyqei::exact_bounds::spectral_bounds;
use polyqei::rational::to_f64;
use polyqei::spectral::kernel::{GreenKernel, KernelEvaluator};
use polyqei::spectral::nystrom::{nystrom_at_order, nystrom_eigs, nystrom_eigs_with, NystromConfig};
use polyqei::Error;

#[test]
fn harmonic_eigenvalues() {
    // -psi'' = lambda psi on (-1, 1) with Dirichlet ends: lambda_k = (k pi / 2)^2.
    let config = NystromConfig {
        rel_tol: 1e-5,
        ..NystromConfig::default()
    };
    let e = nystrom_eigs_with(1, &config).unwrap();
    assert!(((e.lambda1 - 4.0 / (PI * PI)) / e.lambda1).abs() < 1e-5);
    assert!(((e.lambda2 - 1.0 / (PI * PI)) / e.lambda2).abs() < 1e-4);
}

#[test]
fn harmonic_default_tolerance_reports_best() {
    match nystrom_eigs(1, None) {
        Err(Error::Convergence { best, .. }) => assert!((best * PI * PI / 4.0 - 1.0).abs() < 1e-5),
        other => panic!("expected a convergence error, got {other:?}"),
    }
}

#[test]
fn order_and_precision_checks() {
    assert!(matches!(nystrom_eigs(4, Some(16)), Err(Error::Argument(_))));
    let g = GreenKernel::new(3).unwrap();
    assert!(KernelEvaluator::new(&g, 32).is_err());
    assert!(GreenKernel::new(25).is_err());
}

#[test]
fn small_orders_inside_bracket() {
    for n in 2..=8u64 {
        let e = nystrom_eigs(n, None).unwrap();
        let b = spectral_bounds(n).unwrap();
        assert!(e.lambda1 > e.lambda2 && e.lambda2 > 0.0);
        let inv = 1.0 / e.lambda1;
        assert!(to_f64(&b.lambda_lower) <= inv && inv <= to_f64(&b.lambda_upper), "n = {n}");
        assert!(e.residual_estimate <= 1e-8);
    }
}

#[test]
fn leading_eigenfunction_nonnegative() {
    for n in [2u64, 5, 10] {
        let sol = nystrom_at_order(n, 96, &NystromConfig::default()).unwrap();
        let peak = sol.leading_eigenfunction.iter().fold(0.0f64, |a, &b| a.max(b));
        assert!(sol.leading_eigenfunction.iter().all(|&u| u >= -1e-10 * peak), "n = {n}");
        let norm: f64 = sol.leading_eigenfunction.iter().zip(&sol.weights).map(|(u, w)| w * u * u).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        // Even in t: the operator commutes with t -> -t.
        let k = sol.leading_eigenfunction.len();
        for i in 0..k / 2 {
            let (a, b) = (sol.leading_eigenfunction[i], sol.leading_eigenfunction[k - 1 - i]);
            assert!((a - b).abs() < 1e-8 * peak);
        }
    }
}

#[test]
fn rank_one_diagnostic_range() {
    for n in [5u64, 7, 12] {
        let e = nystrom_eigs(n, None).unwrap();
        let r = e.rank1_ratio();
        assert!(r > 0.25 && r < 0.26, "n = {n}: {r}");
        assert!(e.stirling_ratio() > 1.0);
    }
}

#[test]
fn precision_independent() {
    let low = NystromConfig {
        precision_bits: 128,
        ..NystromConfig::default()
    };
    let a = nystrom_eigs_with(6, &low).unwrap();
    let b = nystrom_eigs(6, None).unwrap();
    assert!(((a.lambda1 - b.lambda1) / b.lambda1).abs() < 1e-12);
    assert!(((a.lambda2 - b.lambda2) / b.lambda2).abs() < 1e-10);
}
