//! Exact rational arithmetic: dense polynomials in `t` and in `z = 1 - t^2`,
//! combinatorial helpers, and a fraction-exact Gaussian elimination.
//!
//! Integers and fractions come from `num-bigint`/`num-rational`; every
//! `BigRational` is kept in lowest terms with a positive denominator by the
//! backend after each operation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use crate::error::{Error, Result};

/// Shorthand for the fraction `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(value.into())
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut term = a.clone();
    for _ in 0..k {
        acc *= &term;
        term += BigRational::one();
    }
    acc
}

/// Nearest `f64`, including magnitudes whose numerator and denominator
/// individually overflow `f64`.
pub fn to_f64(value: &BigRational) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    if let Some(v) = value.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    // Scale to a 64-bit quotient and reattach the binary exponent.
    let num = value.numer().abs();
    let den = value.denom().clone();
    let shift = num.bits() as i64 - den.bits() as i64 - 64;
    let q = if shift >= 0 {
        num / (den << shift as usize)
    } else {
        (num << (-shift) as usize) / den
    };
    let mag = q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(shift.clamp(-2000, 2000) as i32);
    if value.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Exact rational approximation of a finite `f64` (every finite double is
/// a dyadic rational, so this is lossless).
pub fn from_f64(value: f64) -> BigRational {
    BigRational::from_float(value).expect("finite float")
}

fn trim(coeffs: &mut Vec<BigRational>) {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
}

/// Polynomial in the monomial basis of `t`; `coeffs[k]` multiplies `t^k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPolynomial {
    coeffs: Vec<BigRational>,
}

impl TPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(degree: usize, c: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    /// `(1 - t^2)^m` expanded by the binomial theorem.
    pub fn one_minus_t2_pow(m: u64) -> Self {
        let mut coeffs = vec![BigRational::zero(); 2 * m as usize + 1];
        for r in 0..=m {
            let c = BigRational::from_integer(binomial(m, r));
            coeffs[2 * r as usize] = if r % 2 == 0 { c } else { -c };
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + to_f64(c))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at `t = 0`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / int(k as i64 + 1)),
        );
        Self::new(coeffs)
    }

    /// Exact definite integral over `[a, b]`.
    pub fn integrate(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }
}

impl fmt::Display for TPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &TPolynomial {
    type Output = TPolynomial;
    fn add(self, rhs: &TPolynomial) -> TPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TPolynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &TPolynomial {
    type Output = TPolynomial;
    fn sub(self, rhs: &TPolynomial) -> TPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TPolynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Sub for TPolynomial {
    type Output = TPolynomial;
    fn sub(self, rhs: TPolynomial) -> TPolynomial {
        &self - &rhs
    }
}

impl Neg for &TPolynomial {
    type Output = TPolynomial;
    fn neg(self) -> TPolynomial {
        TPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &TPolynomial {
    type Output = TPolynomial;
    fn mul(self, rhs: &TPolynomial) -> TPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return TPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TPolynomial::new(out)
    }
}

/// Polynomial in `z = 1 - t^2`; `coeffs[k]` multiplies `z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZPolynomial {
    coeffs: Vec<BigRational>,
}

impl ZPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }
}

/// `sum_k p[k] (1 - t^2)^(n + k)` in the monomial basis of `t`.
pub fn expand_z_to_t(p: &ZPolynomial, n: u64) -> TPolynomial {
    p.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(TPolynomial::zero(), |acc, (k, c)| {
            &acc + &TPolynomial::one_minus_t2_pow(n + k as u64).scale(c)
        })
}

/// `order`-fold exact derivative.
pub fn differentiate(p: &TPolynomial, order: usize) -> TPolynomial {
    (0..order).fold(p.clone(), |acc, _| acc.derivative())
}

/// Solves `matrix * x = rhs` by Gaussian elimination over the rationals.
///
/// Pivots on the first nonzero entry of each column; no rounding occurs, so
/// the returned solution satisfies the system identically.
pub fn solve_linear_exact(matrix: &[Vec<BigRational>], rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    let size = matrix.len();
    if rhs.len() != size {
        return Err(Error::Dimension(format!(
            "matrix has {size} rows but rhs has {} entries",
            rhs.len()
        )));
    }
    if let Some(row) = matrix.iter().find(|row| row.len() != size) {
        return Err(Error::Dimension(format!(
            "matrix is not square: row of length {} in a {size}-row matrix",
            row.len()
        )));
    }

    let mut aug: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or(Error::Singular { column: col })?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for entry in aug[col][col..].iter_mut() {
            *entry *= &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= &factor * p;
            }
        }
    }

    Ok(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// `matrix * x`, exact.
pub fn mat_vec(matrix: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}
