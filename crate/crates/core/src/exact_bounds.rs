//! Exact bounds on the spectral radius of the clamped polyharmonic solution
//! operator `T_n`.
//!
//! Applying `T_n` to `f(t) = (1 - t^2)^n` gives `(1 - t^2)^n P(1 - t^2)` with
//! `P(z) = sum_j alpha_j z^j`. Every `alpha_j` is positive, so
//! `alpha_0 <= r(T_n) <= sum_j alpha_j` and the minimal eigenvalue of the
//! differential problem lies in `[1 / sum_j alpha_j, 1 / alpha_0]`.
//!
//! Everything here is exact: half-integer gamma ratios are reduced to
//! rising factorials before any arithmetic happens.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{
    binomial, expand_z_to_t, factorial, int, pochhammer, rat, solve_linear_exact, to_f64,
    BigRational, TPolynomial, ZPolynomial,
};
use crate::special::ln_gamma;

pub const DEFAULT_MAX_N: u64 = 64;

/// Coefficients of `P` for one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSolution {
    pub n: u64,
    pub alphas: Vec<BigRational>,
    pub p: ZPolynomial,
}

impl AlphaSolution {
    pub fn from_alphas(n: u64, alphas: Vec<BigRational>) -> Self {
        let p = ZPolynomial::new(alphas.clone());
        Self { n, alphas, p }
    }

    /// The exact polynomial `(T_n f)(t) = (1 - t^2)^n P(1 - t^2)`.
    pub fn image(&self) -> TPolynomial {
        expand_z_to_t(&self.p, self.n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralRadiusBounds {
    pub n: u64,
    /// `alpha_0`
    pub lower: BigRational,
    /// `sum_j alpha_j`
    pub upper: BigRational,
    pub ratio_rn: BigRational,
    pub lambda_lower: BigRational,
    pub lambda_upper: BigRational,
}

/// Float view of [`SpectralRadiusBounds`] for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralRadiusBoundsF64 {
    pub n: u64,
    pub lower: f64,
    pub upper: f64,
    pub ratio_rn: f64,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
}

impl SpectralRadiusBounds {
    pub fn to_f64(&self) -> SpectralRadiusBoundsF64 {
        SpectralRadiusBoundsF64 {
            n: self.n,
            lower: to_f64(&self.lower),
            upper: to_f64(&self.upper),
            ratio_rn: to_f64(&self.ratio_rn),
            lambda_lower: to_f64(&self.lambda_lower),
            lambda_upper: to_f64(&self.lambda_upper),
        }
    }
}

/// `R_n` and its terminating-series terms `c_{n,k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RnSeries {
    pub value: BigRational,
    pub terms: Vec<BigRational>,
}

/// Exact computations with an upper limit on `n` to bound factorial growth.
#[derive(Clone, Copy, Debug)]
pub struct ExactBounds {
    max_n: u64,
}

impl Default for ExactBounds {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_N }
    }
}

impl ExactBounds {
    pub fn with_max_n(max_n: u64) -> Self {
        Self { max_n }
    }

    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::argument("n must be at least 1"));
        }
        if n > self.max_n {
            return Err(Error::argument(format!(
                "n = {n} exceeds the exact-arithmetic limit {}; use the float asymptotics",
                self.max_n
            )));
        }
        Ok(())
    }

    /// Solves `A B alpha = beta` by exact elimination.
    pub fn alpha_via_linear_system(&self, n: u64) -> Result<AlphaSolution> {
        self.check(n)?;
        let (matrix, rhs) = alpha_system(n);
        let alphas = solve_linear_exact(&matrix, &rhs)?;
        Ok(AlphaSolution::from_alphas(n, alphas))
    }

    /// Closed gamma-ratio form of `alpha_j`.
    pub fn alpha_closed_form(&self, n: u64, j: u64) -> Result<BigRational> {
        self.check(n)?;
        if j > n {
            return Err(Error::argument(format!("j = {j} out of range 0..={n}")));
        }
        // Gamma(1/2 + n + j) / Gamma(1/2 + 2n)
        let half_ratio = gamma_ratio(&(rat(1, 2) + int((n + j) as i64)), &(rat(1, 2) + int(2 * n as i64)));
        let num = BigRational::from_integer(factorial(2 * n - j - 1) * factorial(2 * j) * n);
        let den = BigRational::from_integer(factorial(2 * n + 2 * j) * factorial(j) * factorial(n - j));
        Ok(half_ratio * num / den)
    }

    pub fn alpha_closed_form_all(&self, n: u64) -> Result<AlphaSolution> {
        let alphas = (0..=n)
            .map(|j| self.alpha_closed_form(n, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlphaSolution::from_alphas(n, alphas))
    }

    pub fn spectral_bounds(&self, n: u64) -> Result<SpectralRadiusBounds> {
        let sol = self.alpha_closed_form_all(n)?;
        Ok(bounds_from_solution(&sol))
    }

    /// `R_n = sum_k c_{n,k}` from the Pochhammer product form
    /// `c_{n,k} = (-n)_k (1/2)_k / ((1-2n)_k (n+1)_k)`.
    pub fn ratio_rn_series(&self, n: u64) -> Result<RnSeries> {
        self.check(n)?;
        let n_rat = int(n as i64);
        let mut terms = Vec::with_capacity(n as usize + 1);
        let mut c = BigRational::one();
        terms.push(c.clone());
        for k in 1..=n {
            let r = int(k as i64);
            // (k-1-n)(k-1/2) / ((k-2n)(n+k))
            let num = (&r - BigRational::one() - &n_rat) * (&r - rat(1, 2));
            let den = (&r - int(2 * n as i64)) * (&n_rat + &r);
            c = c * num / den;
            terms.push(c.clone());
        }
        let value = terms.iter().fold(BigRational::zero(), |acc, c| acc + c);
        Ok(RnSeries { value, terms })
    }
}

/// Rows indexed by the power `t^{2j}`, columns by `alpha_k`.
pub fn alpha_system(n: u64) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let size = n as usize + 1;
    let mut matrix = vec![vec![BigRational::zero(); size]; size];
    let mut rhs = Vec::with_capacity(size);
    for j in 0..=n {
        let sign = if j % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        let a_jj = BigRational::new(factorial(2 * (n + j)), factorial(2 * j)) * &sign;
        for k in j..=n {
            matrix[j as usize][k as usize] = &a_jj * BigRational::from_integer(binomial(n + k, n + j));
        }
        rhs.push(sign * BigRational::from_integer(binomial(n, j)));
    }
    (matrix, rhs)
}

/// `Gamma(a) / Gamma(b)` for `a - b` an integer, as a rising factorial.
pub fn gamma_ratio(a: &BigRational, b: &BigRational) -> BigRational {
    let diff = a - b;
    assert!(diff.is_integer(), "gamma_ratio needs an integer offset");
    let k = diff.to_integer();
    if k.is_negative() {
        let steps: u64 = (-k).try_into().expect("offset fits in u64");
        pochhammer(a, steps).recip()
    } else {
        let steps: u64 = k.try_into().expect("offset fits in u64");
        pochhammer(b, steps)
    }
}

/// `(-1)^n D^{2n} [sum_k alpha_k (1 - t^2)^{n+k}] - (1 - t^2)^n`.
pub fn residual_check(sol: &AlphaSolution) -> TPolynomial {
    let order = 2 * sol.n as usize;
    let mut lhs = crate::rational::differentiate(&sol.image(), order);
    if sol.n % 2 == 1 {
        lhs = -&lhs;
    }
    &lhs - &TPolynomial::one_minus_t2_pow(sol.n)
}

pub fn bounds_from_solution(sol: &AlphaSolution) -> SpectralRadiusBounds {
    let lower = sol.alphas[0].clone();
    let upper = sol.alphas.iter().fold(BigRational::zero(), |acc, a| acc + a);
    SpectralRadiusBounds {
        n: sol.n,
        ratio_rn: &upper / &lower,
        lambda_lower: upper.recip(),
        lambda_upper: lower.recip(),
        lower,
        upper,
    }
}

/// `2 Gamma(n+1) Gamma(2n+1/2) / Gamma(n+1/2) = 2 n! (n+1/2)_n`, exactly.
pub fn inverse_alpha0_exact(n: u64) -> BigRational {
    int(2) * BigRational::from_integer(factorial(n)) * pochhammer(&(rat(1, 2) + int(n as i64)), n)
}

/// The same quantity through floating log-gamma.
pub fn inverse_alpha0_f64(n: f64) -> f64 {
    ln_inverse_alpha0(n).exp()
}

pub fn ln_inverse_alpha0(n: f64) -> f64 {
    std::f64::consts::LN_2 + ln_gamma(n + 1.0) + ln_gamma(2.0 * n + 0.5) - ln_gamma(n + 0.5)
}

/// `1 / (sqrt(2) (2n)!)`, the large-`n` behaviour of `r(T_n)`. This is an
/// asymptote only: it exceeds `alpha_0`, so it is not a lower bound.
pub fn stirling_asymptote(n: u64) -> f64 {
    (-0.5 * std::f64::consts::LN_2 - ln_gamma(2.0 * n as f64 + 1.0)).exp()
}

pub fn alpha_via_linear_system(n: u64) -> Result<AlphaSolution> {
    ExactBounds::default().alpha_via_linear_system(n)
}

pub fn alpha_closed_form(n: u64, j: u64) -> Result<BigRational> {
    ExactBounds::default().alpha_closed_form(n, j)
}

pub fn spectral_bounds(n: u64) -> Result<SpectralRadiusBounds> {
    ExactBounds::default().spectral_bounds(n)
}

pub fn ratio_rn_series(n: u64) -> Result<RnSeries> {
    ExactBounds::default().ratio_rn_series(n)
}
