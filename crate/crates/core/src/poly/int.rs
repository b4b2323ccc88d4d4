use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{gcd_all, MultiPoly, PolyError, RatPoly};
use crate::numeric::bigint_to_dd_scaled;

/// Dense univariate polynomial with integer coefficients, ascending degree.
///
/// The coefficient vector is empty for the zero polynomial and otherwise has
/// a nonzero last entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c · T^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// `T − a`.
    pub fn linear_root(a: i64) -> Self {
        Self::from_i64s(&[-a, 1])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `T^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// Multiplicity of `T` as a factor (the number of leading zero coefficients).
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Positive gcd of the coefficients.
    pub fn content(&self) -> Result<BigInt, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(gcd_all(&self.coeffs))
    }

    /// `self / content(self)`; the sign of `self` stays here.
    pub fn primitive_part(&self) -> Result<IntPoly, PolyError> {
        let c = self.content()?;
        Ok(self.div_exact_scalar(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_ok_and(|c| c.is_one())
    }

    pub(crate) fn div_exact_scalar(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a / c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    /// Reverses the coefficient order: `T^d · P(1/T)`.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * x + BigRational::from_integer(a.clone()))
    }

    /// Horner evaluation in binary64.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let shift = self.scale_shift();
        let scale = libm::scalbn(1.0, shift as i32);
        self.to_f64_scaled(shift)
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
            * scale
    }

    /// Exact Taylor shift `P(T + a)`.
    pub fn shift(&self, a: &BigRational) -> RatPoly {
        RatPoly::from_int(self).shift(a)
    }

    /// `s^d·P(T + r/s)` for `a = r/s` in lowest terms: the shift with
    /// denominators cleared, computed in integers throughout.
    pub fn shift_scaled(&self, a: &BigRational) -> IntPoly {
        if a.is_integer() {
            return self.shift_int(&a.to_integer());
        }
        let (r, s) = (a.numer(), a.denom());
        let Some(d) = self.degree() else { return IntPoly::zero() };
        // Horner in (sT + r): acc ← acc·(sT + r) + a_k·s^{d−k}
        let mut acc: Vec<BigInt> = alloc::vec![self.coeffs[d].clone()];
        let mut spow = BigInt::one();
        for k in (0..d).rev() {
            spow *= s;
            let mut next = alloc::vec![BigInt::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i] += c * r;
                next[i + 1] += c * s;
            }
            next[0] += &self.coeffs[k] * &spow;
            acc = next;
        }
        IntPoly::new(acc)
    }

    /// `P(T + a)` for an integer `a`, staying in ℤ[T].
    pub fn shift_int(&self, a: &BigInt) -> IntPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        IntPoly::new(c)
    }

    /// Power-of-two exponent that brings the largest coefficient near 1.
    pub(crate) fn scale_shift(&self) -> i64 {
        self.coeffs.iter().map(|c| c.bits() as i64).max().unwrap_or(0)
    }

    /// Coefficients as doubles, each multiplied by `2^-shift`.
    pub(crate) fn to_f64_scaled(&self, shift: i64) -> Vec<f64> {
        self.coeffs.iter().map(|c| bigint_to_dd_scaled(c, shift).0).collect()
    }

    /// Coefficients as double-double pairs, each multiplied by `2^-shift`.
    pub(crate) fn to_dd_scaled(&self, shift: i64) -> Vec<(f64, f64)> {
        self.coeffs.iter().map(|c| bigint_to_dd_scaled(c, shift)).collect()
    }

    pub fn to_multi(&self) -> MultiPoly {
        MultiPoly::from_terms(
            1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (vec![i as u32], c.clone())),
        )
    }

    /// Renders the polynomial in the parser's grammar using `var`.
    pub fn display_with(&self, var: &str) -> String {
        self.to_multi().display_with(&[var])
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact division; `None` if `divisor` does not divide `self` in ℤ[T].
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let lc = divisor.leading_coeff()?;
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            if !(top % lc).is_zero() {
                return None;
            }
            let f = top / lc;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &f * d;
            }
            q[k] = f;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("T"))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}
