use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{gcd_all, IntPoly, PolyError};

/// Sparse multivariate polynomial over ℤ.
///
/// Terms are keyed by exponent vectors of length `nvars`; no stored
/// coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    /// The variable `x_index`.
    pub fn var(nvars: usize, index: usize) -> Result<Self, PolyError> {
        if index >= nvars {
            return Err(PolyError::VariableOutOfRange { index, nvars });
        }
        let mut e = vec![0; nvars];
        e[index] = 1;
        Ok(Self::from_terms(nvars, [(e, BigInt::one())]))
    }

    /// Builds from `(exponents, coefficient)` pairs, summing duplicates.
    ///
    /// Panics if an exponent vector has the wrong length.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length must equal nvars");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    /// Adds a new variable `x_0` in front and makes every term degree `m`.
    pub fn homogenize(&self, m: u32) -> Result<MultiPoly, PolyError> {
        if let Some(td) = self.total_degree() {
            if td > m {
                return Err(PolyError::DegreeTooLow { requested: m, actual: td });
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = Vec::with_capacity(self.nvars + 1);
            ne.push(m - e.iter().sum::<u32>());
            ne.extend_from_slice(e);
            (ne, c.clone())
        });
        Ok(MultiPoly::from_terms(self.nvars + 1, terms))
    }

    /// Sets `x_index = 1` and removes that variable.
    pub fn dehomogenize(&self, index: usize) -> Result<MultiPoly, PolyError> {
        if index >= self.nvars {
            return Err(PolyError::VariableOutOfRange { index, nvars: self.nvars });
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = e.clone();
            ne.remove(index);
            (ne, c.clone())
        });
        Ok(MultiPoly::from_terms(self.nvars - 1, terms))
    }

    pub fn content(&self) -> Result<BigInt, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(gcd_all(self.terms.values()))
    }

    pub fn primitive_part(&self) -> Result<MultiPoly, PolyError> {
        let c = self.content()?;
        Ok(MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v / &c)).collect(),
        })
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_ok_and(|c| c.is_one())
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::constant(self.nvars, BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Views a one-variable polynomial as dense.
    pub fn to_univariate(&self) -> Result<IntPoly, PolyError> {
        if self.nvars != 1 {
            return Err(PolyError::NotUnivariate { nvars: self.nvars });
        }
        let deg = self.terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            coeffs[e[0] as usize] = c.clone();
        }
        Ok(IntPoly::new(coeffs))
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(crate::numeric::bigint_to_dd_scaled(c, 0).0, 0.0);
            for (z, &k) in point.iter().zip(e) {
                t *= z.powu(k);
            }
            acc += t;
        }
        acc
    }

    /// Renders in the parser's grammar; terms in descending lexicographic
    /// exponent order.
    pub fn display_with<S: AsRef<str>>(&self, vars: &[S]) -> String {
        assert_eq!(vars.len(), self.nvars, "one name per variable");
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !mag.is_one() || is_const {
                factors.push(alloc::format!("{mag}"));
            }
            for (v, &k) in vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => factors.push(String::from(v.as_ref())),
                    _ => factors.push(alloc::format!("{}^{}", v.as_ref(), k)),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn homogenize_examples() {
        let f = parse_poly("x - 2", &["x"]).unwrap();
        let h = f.homogenize(1).unwrap();
        assert_eq!(h, parse_poly("x1 - 2*x0", &["x0", "x1"]).unwrap());
        assert_eq!(h.dehomogenize(0).unwrap(), f);

        let g = parse_poly("1 + x + y", &["x", "y"]).unwrap();
        assert_eq!(
            g.homogenize(1).unwrap(),
            parse_poly("x0 + x1 + x2", &["x0", "x1", "x2"]).unwrap()
        );
        assert_eq!(
            g.homogenize(0),
            Err(PolyError::DegreeTooLow { requested: 0, actual: 1 })
        );
    }

    #[test]
    fn cancellation_removes_terms() {
        let f = parse_poly("x*y - y*x + 2", &["x", "y"]).unwrap();
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.coeff(&[0, 0]), BigInt::from(2));
    }

    #[test]
    fn display_round_trip() {
        let f = parse_poly("-3*x^2*y + x - 1", &["x", "y"]).unwrap();
        let s = f.display_with(&["x", "y"]);
        assert_eq!(parse_poly(&s, &["x", "y"]).unwrap(), f);
    }
}
