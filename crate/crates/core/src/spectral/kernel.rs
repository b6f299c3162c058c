//! Green's function of `(-1)^n d^{2n}/dt^{2n}` on `(-1, 1)` with clamped
//! conditions `psi^{(j)}(+-1) = 0`, `0 <= j < n`.
//!
//! For a source point `s` the kernel is `sum_k c_k(s) t^k` to the left of
//! `s`, plus `(-1)^n (t - s)^{2n-1} / (2n-1)!` to the right. The `2n`
//! boundary conditions fix the `c_k(s)`, which are polynomials in `s` with
//! rational coefficients, so both pieces are stored as exact tables of
//! `t^k s^l` coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, from_f64, solve_linear_exact, BigRational, TPolynomial};

pub const DEFAULT_MAX_KERNEL_N: u64 = 24;
pub const MIN_PRECISION_BITS: u32 = 64;

/// Coefficient table: `table[k][l]` multiplies `t^k s^l`.
pub type CoeffTable = Vec<Vec<BigRational>>;

#[derive(Clone, Debug, PartialEq)]
pub struct GreenKernel {
    pub n: u64,
    /// Valid for `t <= s`.
    pub left_coeffs: CoeffTable,
    /// Valid for `t >= s`.
    pub right_coeffs: CoeffTable,
}

/// `d^j/dt^j t^k` at `t = x`.
fn monomial_derivative_at(k: usize, j: usize, x: &BigRational) -> BigRational {
    if j > k {
        return BigRational::zero();
    }
    let falling: BigInt = ((k - j + 1)..=k).fold(BigInt::one(), |acc, v| acc * v);
    BigRational::from_integer(falling) * num_traits::pow(x.clone(), k - j)
}

fn eval_table(table: &CoeffTable, t: &BigRational, s: &BigRational) -> BigRational {
    table.iter().rev().fold(BigRational::zero(), |acc, row| {
        let c = row.iter().rev().fold(BigRational::zero(), |a, v| a * s + v);
        acc * t + c
    })
}

/// Polynomial in `t` obtained by fixing `s` in a table.
fn table_at_s(table: &CoeffTable, s: &BigRational) -> TPolynomial {
    TPolynomial::new(
        table
            .iter()
            .map(|row| row.iter().rev().fold(BigRational::zero(), |a, v| a * s + v))
            .collect(),
    )
}

impl GreenKernel {
    pub fn new(n: u64) -> Result<Self> {
        Self::with_limit(n, DEFAULT_MAX_KERNEL_N)
    }

    pub fn with_limit(n: u64, max_n: u64) -> Result<Self> {
        if n == 0 || n > max_n {
            return Err(Error::argument(format!("kernel order n = {n} outside 1..={max_n}")));
        }
        let size = 2 * n as usize;
        let nu = n as usize;
        let minus_one = -BigRational::one();
        let plus_one = BigRational::one();

        // Rows 0..n: left end; rows n..2n: right end.
        let mut matrix = vec![vec![BigRational::zero(); size]; size];
        for j in 0..nu {
            for k in 0..size {
                matrix[j][k] = monomial_derivative_at(k, j, &minus_one);
                matrix[nu + j][k] = monomial_derivative_at(k, j, &plus_one);
            }
        }

        let jump_sign = if n % 2 == 0 { BigRational::one() } else { -BigRational::one() };

        // Columns of the inverse that meet the nonzero right-hand sides.
        let mut left = vec![vec![BigRational::zero(); size]; size];
        for j in 0..nu {
            let mut unit = vec![BigRational::zero(); size];
            unit[nu + j] = BigRational::one();
            let column = solve_linear_exact(&matrix, &unit)?;
            // rhs_j(s) = -(-1)^n (1 - s)^m / m!, m = 2n - 1 - j
            let m = (size - 1 - j) as u64;
            let scale = -&jump_sign / BigRational::from_integer(factorial(m));
            for l in 0..=m as usize {
                let mut coeff = BigRational::from_integer(binomial(m, l as u64)) * &scale;
                if l % 2 == 1 {
                    coeff = -coeff;
                }
                for (k, row) in left.iter_mut().enumerate() {
                    if !column[k].is_zero() {
                        row[l] += &column[k] * &coeff;
                    }
                }
            }
        }

        // right = left + (-1)^n (t - s)^{2n-1} / (2n-1)!
        let mut right = left.clone();
        let deg = size as u64 - 1;
        let base = &jump_sign / BigRational::from_integer(factorial(deg));
        for k in 0..size {
            let l = size - 1 - k;
            let mut coeff = BigRational::from_integer(binomial(deg, k as u64)) * &base;
            if l % 2 == 1 {
                coeff = -coeff;
            }
            right[k][l] += coeff;
        }

        Ok(Self {
            n,
            left_coeffs: left,
            right_coeffs: right,
        })
    }

    /// Exact `G(t, s)` at rational points of `[-1, 1]^2`.
    pub fn eval(&self, t: &BigRational, s: &BigRational) -> BigRational {
        if t <= s {
            eval_table(&self.left_coeffs, t, s)
        } else {
            eval_table(&self.right_coeffs, t, s)
        }
    }

    /// Left and right `t`-pieces for a fixed source point.
    pub fn pieces_at(&self, s: &BigRational) -> (TPolynomial, TPolynomial) {
        (table_at_s(&self.left_coeffs, s), table_at_s(&self.right_coeffs, s))
    }

    /// Residuals of the `4n` defining conditions at source point `s`:
    /// `2n` boundary values, `2n - 1` derivative matches at `t = s`, and
    /// the jump of the `(2n-1)`-th derivative minus `(-1)^n`. All are
    /// exactly zero for a correct kernel.
    pub fn condition_residuals(&self, s: &BigRational) -> Vec<BigRational> {
        let size = 2 * self.n as usize;
        let (left, right) = self.pieces_at(s);
        let mut out = Vec::with_capacity(2 * size);
        let minus_one = -BigRational::one();
        let plus_one = BigRational::one();
        let mut dl = left.clone();
        let mut dr = right.clone();
        let mut left_ders = Vec::with_capacity(size);
        let mut right_ders = Vec::with_capacity(size);
        for _ in 0..size {
            left_ders.push(dl.clone());
            right_ders.push(dr.clone());
            dl = dl.derivative();
            dr = dr.derivative();
        }
        for j in 0..self.n as usize {
            out.push(left_ders[j].eval(&minus_one));
            out.push(right_ders[j].eval(&plus_one));
        }
        for j in 0..size - 1 {
            out.push(&right_ders[j].eval(s) - &left_ders[j].eval(s));
        }
        let jump = &right_ders[size - 1].eval(s) - &left_ders[size - 1].eval(s);
        let expected = if self.n % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        out.push(jump - expected);
        out
    }

    /// `t -> int_{-1}^{1} G(t, s) ds` as an exact polynomial in `t`.
    pub fn integral_over_source(&self) -> TPolynomial {
        // t >= s on [-1, t] uses the right piece; t <= s on [t, 1] the left.
        let size = self.left_coeffs.len();
        let mut acc = TPolynomial::zero();
        for k in 0..size {
            for l in 0..size {
                let inv = BigRational::new(BigInt::one(), BigInt::from(l + 1));
                // int_{-1}^t s^l ds = (t^{l+1} - (-1)^{l+1}) / (l+1)
                let lower_end = if (l + 1) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                let right = &self.right_coeffs[k][l];
                let left = &self.left_coeffs[k][l];
                if !right.is_zero() {
                    let p = TPolynomial::monomial(k + l + 1, right * &inv)
                        - TPolynomial::monomial(k, right * &inv * &lower_end);
                    acc = &acc + &p;
                }
                if !left.is_zero() {
                    // int_t^1 s^l ds = (1 - t^{l+1}) / (l+1)
                    let p = TPolynomial::monomial(k, left * &inv) - TPolynomial::monomial(k + l + 1, left * &inv);
                    acc = &acc + &p;
                }
            }
        }
        acc
    }
}

/// Fixed-point evaluator for `(2n)! G(t, s)` at floating-point nodes.
///
/// Coefficients and arguments are rounded to multiples of `2^-bits` and
/// all products are exact big-integer operations truncated back to `bits`
/// fractional bits. Because `|t|, |s| <= 1`, each Horner step contributes
/// at most one unit in the last place, so the absolute error is about
/// `(2n)^2 * 2^-bits` no matter how much the monomial sums cancel.
#[derive(Clone, Debug)]
pub struct KernelEvaluator {
    n: u64,
    bits: u32,
    left: Vec<Vec<BigInt>>,
    right: Vec<Vec<BigInt>>,
    scale: f64,
}

fn to_fixed(value: &BigRational, bits: u32) -> BigInt {
    let shifted = value.numer() << bits as usize;
    shifted.div_floor(value.denom())
}

fn fixed_to_f64(value: &BigInt, bits: u32) -> f64 {
    let r = BigRational::new(value.clone(), BigInt::one() << bits as usize);
    crate::rational::to_f64(&r)
}

impl KernelEvaluator {
    pub fn new(kernel: &GreenKernel, bits: u32) -> Result<Self> {
        if bits < MIN_PRECISION_BITS {
            return Err(Error::argument(format!(
                "precision_bits must be at least {MIN_PRECISION_BITS}, got {bits}"
            )));
        }
        let fact = BigRational::from_integer(factorial(2 * kernel.n));
        let convert = |table: &CoeffTable| -> Vec<Vec<BigInt>> {
            table
                .iter()
                .map(|row| row.iter().map(|c| to_fixed(&(c * &fact), bits)).collect())
                .collect()
        };
        Ok(Self {
            n: kernel.n,
            bits,
            left: convert(&kernel.left_coeffs),
            right: convert(&kernel.right_coeffs),
            scale: crate::rational::to_f64(&fact),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(2n)!`, the factor between [`Self::scaled`] and `G`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn fixed_point(&self, x: f64) -> BigInt {
        to_fixed(&from_f64(x), self.bits)
    }

    /// Coefficients in `t` of both pieces at a fixed source point.
    pub fn source_coeffs(&self, s: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
        let collapse = |table: &Vec<Vec<BigInt>>| -> Vec<BigInt> {
            table
                .iter()
                .map(|row| {
                    row.iter()
                        .rev()
                        .fold(BigInt::zero(), |acc, c| ((acc * s) >> self.bits as usize) + c)
                })
                .collect()
        };
        (collapse(&self.left), collapse(&self.right))
    }

    /// Horner in fixed point; returns the value rounded to `f64`.
    pub fn eval_poly(&self, coeffs: &[BigInt], t: &BigInt) -> f64 {
        let acc = coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| ((acc * t) >> self.bits as usize) + c);
        fixed_to_f64(&acc, self.bits)
    }

    /// `(2n)! G(t, s)`.
    pub fn scaled(&self, t: f64, s: f64) -> f64 {
        let (left, right) = self.source_coeffs(&self.fixed_point(s));
        let coeffs = if t <= s { &left } else { &right };
        self.eval_poly(coeffs, &self.fixed_point(t))
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        self.scaled(t, s) / self.scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn harmonic_kernel_closed_form() {
        let g = GreenKernel::new(1).unwrap();
        assert_eq!(g.eval(&int(0), &int(0)), rat(1, 2));
        for (t, s) in [(rat(-1, 2), rat(1, 3)), (rat(3, 4), rat(-1, 5)), (rat(1, 7), rat(1, 7))] {
            let (lo, hi) = if t <= s { (t.clone(), s.clone()) } else { (s.clone(), t.clone()) };
            let expected = (int(1) - hi) * (int(1) + lo) / int(2);
            assert_eq!(g.eval(&t, &s), expected);
        }
    }

    #[test]
    fn conditions_hold_exactly() {
        for n in 1..=6 {
            let g = GreenKernel::new(n).unwrap();
            for s in [rat(-2, 3), rat(0, 1), rat(1, 5), rat(9, 10)] {
                let r = g.condition_residuals(&s);
                assert_eq!(r.len(), 4 * n as usize);
                assert!(r.iter().all(Zero::is_zero), "n = {n}, s = {s}");
            }
        }
    }

    #[test]
    fn symmetric_pair() {
        for n in 1..=8 {
            let g = GreenKernel::new(n).unwrap();
            assert_eq!(g.eval(&rat(3, 10), &rat(-7, 10)), g.eval(&rat(-7, 10), &rat(3, 10)));
        }
    }

    #[test]
    fn order_limits() {
        assert!(GreenKernel::new(0).is_err());
        assert!(GreenKernel::new(25).is_err());
        assert!(GreenKernel::with_limit(3, 2).is_err());
    }

    #[test]
    fn fixed_point_matches_exact() {
        let g = GreenKernel::new(7).unwrap();
        let ev = KernelEvaluator::new(&g, 128).unwrap();
        for (t, s) in [(0.25, -0.5), (-0.875, 0.125), (0.5, 0.5), (0.9375, 0.0625)] {
            let exact = crate::rational::to_f64(&g.eval(&from_f64(t), &from_f64(s)));
            let approx = ev.eval(t, s);
            assert!(((approx - exact) / exact).abs() < 1e-13, "({t}, {s}): {approx} vs {exact}");
        }
        assert!(KernelEvaluator::new(&g, 32).is_err());
    }
}
