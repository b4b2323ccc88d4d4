//! Polynomial gcd over ℤ and square-free decomposition.
//!
//! Only used to get exact root multiplicities; a modular check certifies the
//! common square-free case without running the integer remainder sequence.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{IntPoly, RatPoly};
use num_rational::BigRational;
use num_traits::One;

fn normalize_sign(p: IntPoly) -> IntPoly {
    if p.leading_coeff().is_some_and(Signed::is_negative) {
        -p
    } else {
        p
    }
}

fn primitive_or_zero(p: &IntPoly) -> IntPoly {
    p.primitive_part().unwrap_or_default()
}

/// Pseudo-remainder of `f` by `g` (`g` nonzero).
fn pseudo_rem(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let dg = g.degree().expect("nonzero divisor");
    let lg = g.leading_coeff().expect("nonzero divisor").clone();
    let mut r: Vec<BigInt> = f.coeffs().to_vec();
    while r.len() > dg && !r.is_empty() {
        let k = r.len() - 1 - dg;
        let lr = r.last().cloned().unwrap_or_default();
        for c in r.iter_mut() {
            *c *= &lg;
        }
        for (j, gc) in g.coeffs().iter().enumerate() {
            r[k + j] -= &lr * gc;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    IntPoly::new(r)
}

/// `Res(a, b) = a_m^{deg b}·Π b(α_i)` over the roots `α_i` of `a`, by the
/// Euclidean recursion over ℚ. Zero if either input is zero.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let mut a = RatPoly::from_int(a);
    let mut b = RatPoly::from_int(b);
    let mut acc = BigRational::one();
    loop {
        let m = a.degree().unwrap_or(0);
        let n = b.degree().unwrap_or(0);
        if m == 0 {
            acc *= num_traits::pow(a.coeff(0), n);
            break;
        }
        if n == 0 {
            acc *= num_traits::pow(b.coeff(0), m);
            break;
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        let k = r.degree().unwrap_or(0);
        if m * n % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.coeff(n), m - k);
        a = b;
        b = r;
    }
    acc.to_integer()
}

/// Primitive gcd of two integer polynomials with positive leading
/// coefficient; contents are ignored. Zero if both inputs are zero.
pub fn primitive_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut f, mut g) = (primitive_or_zero(a), primitive_or_zero(b));
    if f.degree() < g.degree() {
        core::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let r = pseudo_rem(&f, &g);
        f = g;
        g = primitive_or_zero(&r);
    }
    normalize_sign(f)
}

const MOD_P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    acc
}

fn reduce(c: &BigInt) -> u64 {
    c.mod_floor(&BigInt::from(MOD_P)).to_u64().unwrap_or(0)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of gcd(P mod q, P' mod q) for q = 2^61 − 1, or `None` when q
/// divides the leading coefficient.
fn gcd_degree_mod(p: &IntPoly) -> Option<usize> {
    let lc = reduce(p.leading_coeff()?);
    if lc == 0 {
        return None;
    }
    let mut a: Vec<u64> = p.coeffs().iter().map(reduce).collect();
    let mut b: Vec<u64> = p.derivative().coeffs().iter().map(reduce).collect();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let inv = powmod(*b.last()?, MOD_P - 2);
        while a.len() >= b.len() {
            let f = mulmod(*a.last()?, inv);
            let k = a.len() - b.len();
            for (j, &bc) in b.iter().enumerate() {
                a[k + j] = (a[k + j] + MOD_P - mulmod(f, bc)) % MOD_P;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        core::mem::swap(&mut a, &mut b);
    }
    Some(a.len().saturating_sub(1))
}

/// `Some(true)` is a proof that `p` is square-free over ℚ; anything else is
/// inconclusive.
pub(crate) fn certify_squarefree(p: &IntPoly) -> Option<bool> {
    gcd_degree_mod(p).map(|d| d == 0)
}

/// Yun's square-free decomposition of a nonconstant polynomial, ignoring
/// the content: returns primitive square-free, pairwise coprime factors
/// `Q_i` with multiplicities so that `p = ±content · Π Q_i^{m_i}`.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, u32)> {
    let Some(deg) = p.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let p = normalize_sign(primitive_or_zero(p));
    if deg == 1 || certify_squarefree(&p) == Some(true) {
        return vec![(p, 1)];
    }
    let dp = p.derivative();
    let a0 = primitive_gcd(&p, &dp);
    let mut b = p.div_exact(&a0).expect("gcd divides p");
    let c = dp.div_exact(&a0).expect("gcd divides p'");
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = primitive_gcd(&b, &d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides b");
        let c = d.div_exact(&a).expect("gcd divides d");
        d = &c - &b.derivative();
        i += 1;
    }
    out
}
