use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntPoly;

/// Shorthand for `num / den` as a reduced big rational.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Dense univariate polynomial with rational coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        while p.coeffs.last().is_some_and(Zero::is_zero) {
            p.coeffs.pop();
        }
        p
    }

    pub fn from_int(p: &IntPoly) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    /// Exact Taylor shift `P(T + a)` by repeated synthetic division.
    pub fn shift(&self, a: &BigRational) -> RatPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        if a.is_zero() || n < 2 {
            return RatPoly::new(c);
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        RatPoly::new(c)
    }

    /// Clears denominators: returns `(m, Q)` with `Q = m·P ∈ ℤ[T]`, `m > 0`
    /// the lcm of the coefficient denominators.
    pub fn clear_denominators(&self) -> (BigInt, IntPoly) {
        let m = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&m / c.denom()))
            .collect();
        (m, IntPoly::new(coeffs))
    }

    /// Returns the integer polynomial if every coefficient is integral.
    pub fn to_int(&self) -> Option<IntPoly> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Remainder of division by a nonzero `d`.
    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        let dd = d.degree().expect("nonzero divisor");
        let ld = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let q = r.pop().unwrap_or_default() / &ld;
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                r[k + j] -= &q * dc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }
}
