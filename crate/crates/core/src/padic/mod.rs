//! Exact p-adic local computations.
//!
//! Everything here is a rational number in units of `log p`; floats appear
//! only in [`LocalValue::to_f64`].

mod newton;
mod primes;

use core::fmt;
use core::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use newton::{newton_polygon, root_valuations, NewtonPolygon, Segment};
pub use primes::{relevant_primes, RelevantPrimes, DEFAULT_TRIAL_BOUND};

use crate::poly::{resultant, IntPoly, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("divisor polynomial is not primitive")]
    NotPrimitive,
    #[error("the orbit meets the divisor")]
    MeetsDivisor,
    #[error("polynomial has degree 0")]
    Constant,
}

/// A prime, checked by trial division when `p ≤ bound²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime {
    p: u64,
    trusted: bool,
}

impl Prime {
    /// Checks primality by trial division up to [`DEFAULT_TRIAL_BOUND`].
    pub fn new(p: u64) -> Result<Self, PadicError> {
        Self::with_bound(p, DEFAULT_TRIAL_BOUND)
    }

    /// Divisors up to `bound` are tried. If none divides `p` but
    /// `p > bound²`, the result is flagged as trusted rather than proved.
    pub fn with_bound(p: u64, bound: u64) -> Result<Self, PadicError> {
        if p < 2 {
            return Err(PadicError::NotPrime(p));
        }
        let mut d = 2u64;
        while d <= bound && d.saturating_mul(d) <= p {
            if p % d == 0 {
                return Err(PadicError::NotPrime(p));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        Ok(Prime { p, trusted: d.saturating_mul(d) <= p })
    }

    pub fn get(self) -> u64 {
        self.p
    }

    /// True when primality was assumed rather than checked.
    pub fn is_trusted(self) -> bool {
        self.trusted
    }

    pub fn ln(self) -> f64 {
        libm::log(self.p as f64)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// A p-adic valuation; `Infinite` is `v_p(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn vp_int(x: &BigInt, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = BigInt::from(p.p);
    let mut x = x.abs();
    let mut v = 0;
    // strip p^k in blocks first; valuations can run to thousands
    let mut block = pb.clone();
    let mut width = 1i64;
    loop {
        let (q, r) = x.div_rem(&block);
        if r.is_zero() {
            x = q;
            v += width;
            if width < 64 {
                block = &block * &block;
                width *= 2;
            }
        } else if width > 1 {
            block = pb.clone();
            width = 1;
        } else {
            break;
        }
    }
    Valuation::Finite(v)
}

pub fn vp(x: &BigRational, p: Prime) -> Valuation {
    match (vp_int(x.numer(), p), vp_int(x.denom(), p)) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        _ => Valuation::Infinite,
    }
}

fn vp_finite(x: &BigInt, p: Prime) -> i64 {
    vp_int(x, p).finite().expect("nonzero argument")
}

/// An exact multiple of `log p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalValue {
    pub coefficient_of_log_p: BigRational,
    pub p: Prime,
}

impl LocalValue {
    pub fn zero(p: Prime) -> Self {
        Self { coefficient_of_log_p: BigRational::zero(), p }
    }

    pub fn new(coefficient_of_log_p: BigRational, p: Prime) -> Self {
        Self { coefficient_of_log_p, p }
    }

    pub fn to_f64(&self) -> f64 {
        crate::numeric::rational_to_f64(&self.coefficient_of_log_p) * self.p.ln()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient_of_log_p.is_zero()
    }
}

/// `−min_i v_p(a_i)`, so that `‖P‖_Gauss = p^value`.
pub fn gauss_norm_exponent(f: &IntPoly, p: Prime) -> Result<i64, PadicError> {
    min_valuation(f.coeffs().iter(), p).map(|v| -v)
}

/// As [`gauss_norm_exponent`] for a multivariate polynomial.
pub fn gauss_norm_exponent_multi(f: &MultiPoly, p: Prime) -> Result<i64, PadicError> {
    min_valuation(f.terms().map(|(_, c)| c), p).map(|v| -v)
}

fn min_valuation<'a>(coeffs: impl Iterator<Item = &'a BigInt>, p: Prime) -> Result<i64, PadicError> {
    coeffs
        .filter_map(|c| vp_int(c, p).finite())
        .min()
        .ok_or(PadicError::ZeroPolynomial)
}

/// `Σ_i log max(1, |α_i|_p)` over the roots of `P`, read off the Newton
/// polygon.
pub fn finite_local_mahler(f: &IntPoly, p: Prime) -> Result<LocalValue, PadicError> {
    if f.is_zero() {
        return Err(PadicError::ZeroPolynomial);
    }
    let np = newton_polygon(f, p);
    let mut acc = BigRational::zero();
    for (val, mult) in root_valuations(&np) {
        if val.is_negative() {
            acc -= val * BigInt::from(mult);
        }
    }
    Ok(LocalValue::new(acc, p))
}

fn degree(f: &IntPoly) -> Result<usize, PadicError> {
    match f.degree() {
        None => Err(PadicError::ZeroPolynomial),
        Some(0) => Err(PadicError::Constant),
        Some(d) => Ok(d),
    }
}

/// `(1/d)·Σ_i log‖T − a‖_p⁻¹(α_i)` over the roots of `P`, exactly:
/// `(1/d)·[(v_p(a_d) − min_j v_p(a_j)) + (v_p(P(a)) − v_p(a_d))]`.
pub fn empirical_integral_padic(f: &IntPoly, a: &BigRational, p: Prime) -> Result<LocalValue, PadicError> {
    let d = degree(f)?;
    let at = match vp(&f.eval_rational(a), p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => return Err(PadicError::MeetsDivisor),
    };
    let min = -gauss_norm_exponent(f, p)?;
    Ok(LocalValue::new(BigRational::new(BigInt::from(at - min), BigInt::from(d)), p))
}

/// The same integral from root valuations: the polygon of `P` for the
/// `log max(1, |α|_p)` part and the polygon of `P(T + a)` for `−log|α − a|_p`.
pub fn empirical_integral_padic_polygon(
    f: &IntPoly,
    a: &BigRational,
    p: Prime,
) -> Result<LocalValue, PadicError> {
    let d = degree(f)?;
    let shifted = f.shift_scaled(a);
    if shifted.coeff(0).is_zero() {
        return Err(PadicError::MeetsDivisor);
    }
    let outer = finite_local_mahler(f, p)?.coefficient_of_log_p;
    let mut inner = BigRational::zero();
    for (val, mult) in root_valuations(&newton_polygon(&shifted, p)) {
        inner += val * BigInt::from(mult);
    }
    Ok(LocalValue::new((outer + inner) / BigInt::from(d), p))
}

/// `(1/d)·Σ_i log‖G‖_p⁻¹(α_i)` for a general divisor polynomial `G` of
/// degree `m`, viewed in `O(m)` with the Weil metric:
/// `Σ_i v_p(G(α_i)) = v_p(Res(P, G)) − m·v_p(a_d)`.
pub fn empirical_integral_padic_divisor(
    f: &IntPoly,
    g: &IntPoly,
    p: Prime,
) -> Result<LocalValue, PadicError> {
    let d = degree(f)?;
    if g.is_zero() {
        return Err(PadicError::ZeroPolynomial);
    }
    let m = g.degree().unwrap_or(0) as i64;
    let res = resultant(f, g);
    if res.is_zero() {
        return Err(PadicError::MeetsDivisor);
    }
    let lead = vp_finite(f.leading_coeff().expect("nonzero"), p);
    let outer = finite_local_mahler(f, p)?.coefficient_of_log_p;
    let inner = vp_finite(&res, p) - m * lead;
    let total = outer * BigInt::from(m) + BigInt::from(inner);
    Ok(LocalValue::new(total / BigInt::from(d), p))
}

/// `∫ log‖G‖_p⁻¹` against the Dirac mass at the Gauss point: zero for
/// primitive `G`.
pub fn equilibrium_integral_gauss(g: &IntPoly, p: Prime) -> Result<LocalValue, PadicError> {
    if g.is_zero() {
        return Err(PadicError::ZeroPolynomial);
    }
    if !g.is_primitive() {
        return Err(PadicError::NotPrimitive);
    }
    Ok(LocalValue::zero(p))
}
