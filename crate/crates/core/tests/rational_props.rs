use num_traits::Zero;
use polyqei::rational::{
    differentiate, expand_z_to_t, from_f64, int, mat_vec, rat, solve_linear_exact, to_f64, BigRational, TPolynomial,
    ZPolynomial,
};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-50i64..50, 1i64..20).prop_map(|(p, q)| rat(p, q))
}

fn poly() -> impl Strategy<Value = TPolynomial> {
    prop::collection::vec(small_rat(), 0..8).prop_map(TPolynomial::new)
}

proptest! {
    #[test]
    fn add_sub_inverse(a in poly(), b in poly()) {
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn mul_distributes(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn eval_is_ring_homomorphism(a in poly(), b in poly(), t in small_rat()) {
        prop_assert_eq!((&a * &b).eval(&t), a.eval(&t) * b.eval(&t));
        prop_assert_eq!((&a + &b).eval(&t), a.eval(&t) + b.eval(&t));
    }

    #[test]
    fn derivative_lowers_degree(a in poly()) {
        let d = a.derivative();
        match a.degree() {
            Some(k) if k > 0 => prop_assert_eq!(d.degree(), Some(k - 1)),
            _ => prop_assert!(d.is_zero()),
        }
    }

    #[test]
    fn antiderivative_inverts_derivative(a in poly()) {
        prop_assert_eq!(a.antiderivative().derivative(), a);
    }

    #[test]
    fn repeated_differentiation(a in poly(), k in 0usize..5) {
        let mut b = a.clone();
        for _ in 0..k {
            b = b.derivative();
        }
        prop_assert_eq!(differentiate(&a, k), b);
    }

    #[test]
    fn z_expansion_matches_direct_sum(coeffs in prop::collection::vec(small_rat(), 0..5), n in 0u64..4, t in small_rat()) {
        let z = int(1) - &t * &t;
        let mut direct = BigRational::zero();
        let mut zk = (0..n).fold(int(1), |acc, _| acc * &z);
        for c in &coeffs {
            direct += c * &zk;
            zk *= &z;
        }
        prop_assert_eq!(expand_z_to_t(&ZPolynomial::new(coeffs), n).eval(&t), direct);
    }

    #[test]
    fn dominant_systems_solve_exactly(entries in prop::collection::vec(small_rat(), 16), rhs in prop::collection::vec(small_rat(), 4)) {
        let mut m: Vec<Vec<BigRational>> = entries.chunks(4).map(|r| r.to_vec()).collect();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += int(1000);
        }
        let x = solve_linear_exact(&m, &rhs).unwrap();
        prop_assert_eq!(mat_vec(&m, &x), rhs);
    }

    #[test]
    fn dyadic_round_trip(v in -1.0e12f64..1.0e12) {
        prop_assert_eq!(to_f64(&from_f64(v)), v);
    }

    #[test]
    fn lowest_terms(p in -1000i64..1000, q in 1i64..1000) {
        let r = rat(p, q);
        let g = num_integer::Integer::gcd(r.numer(), r.denom());
        prop_assert!(r.is_zero() || g == num_bigint::BigInt::from(1));
        prop_assert!(r.denom() > &num_bigint::BigInt::from(0));
    }
}
