//! Float conversions for big integers and rationals that never overflow
//! on the way to a logarithm.

use core::f64::consts::LN_2;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// `ln |x|` for a nonzero big integer; `-inf` for zero.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.abs().to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    libm::log(top.to_f64().unwrap_or(f64::INFINITY)) + shift as f64 * LN_2
}

/// `ln |x|` for a rational; `-inf` for zero.
pub fn ln_abs_rational(x: &BigRational) -> f64 {
    ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom())
}

/// Splits `x · 2^-shift` into a double-double pair `(hi, lo)`.
///
/// Exact whenever `x` has at most 106 significant bits and the scaled value
/// stays in the normal range.
pub fn bigint_to_dd_scaled(x: &BigInt, shift: i64) -> (f64, f64) {
    if x.is_zero() {
        return (0.0, 0.0);
    }
    let bits = x.bits() as i64;
    let (trimmed, extra) = if bits > 120 {
        let s = (bits - 120) as u64;
        (x >> s, s as i64)
    } else {
        (x.clone(), 0)
    };
    let hi = trimmed.to_f64().unwrap_or(0.0);
    let rest = &trimmed - BigInt::from_f64(hi).unwrap_or_default();
    let lo = rest.to_f64().unwrap_or(0.0);
    let e = (extra - shift) as i32;
    (libm::scalbn(hi, e), libm::scalbn(lo, e))
}

/// Nearest double to a rational, computed without intermediate overflow.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let n = x.numer();
    let d = x.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // bring the quotient to ~64 significant bits before dividing
    let shift = 64 - (nb - db);
    let (num, den) = if shift >= 0 {
        (n << (shift as u64), d.clone())
    } else {
        (n.clone(), d << ((-shift) as u64))
    };
    let (q, _) = num.div_rem(&den);
    let qf = q.to_f64().unwrap_or(0.0);
    libm::scalbn(qf, -(shift as i32))
}

/// Sign of a big integer as `-1`, `0` or `1`.
pub fn signum(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Pow};

    #[test]
    fn ln_of_huge_integer() {
        let x: BigInt = BigInt::from(10).pow(400u32);
        let got = ln_abs_bigint(&x);
        assert!((got - 400.0 * core::f64::consts::LN_10).abs() < 1e-10);
        assert_eq!(ln_abs_bigint(&BigInt::zero()), f64::NEG_INFINITY);
        assert_eq!(ln_abs_bigint(&BigInt::from(-1)), 0.0);
    }

    #[test]
    fn dd_split_is_exact_for_100_bits() {
        let x: BigInt = (BigInt::one() << 100u32) + BigInt::from(12345);
        let (hi, lo) = bigint_to_dd_scaled(&x, 100);
        assert_eq!(hi, 1.0);
        assert_eq!(lo, 12345.0 / 2f64.powi(100));
    }

    #[test]
    fn rational_conversion() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!((rational_to_f64(&r) - 1.0 / 3.0).abs() < 1e-16);
        let r = BigRational::new(BigInt::from(-7), BigInt::from(2));
        assert_eq!(rational_to_f64(&r), -3.5);
    }
}
