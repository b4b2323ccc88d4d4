//! Escape rates `λ_v(x) = lim 2^{-k}·log max(1, |f^k(x)|_v)` for
//! `f(z) = z² + c` and their sum, the canonical height.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::HeightError;
use crate::numeric::{ln_abs_bigint, ln_abs_rational, rational_to_f64};
use crate::padic::{newton_polygon, relevant_primes, root_valuations, vp, LocalValue, Prime, Valuation, DEFAULT_TRIAL_BOUND};
use crate::poly::IntPoly;
use crate::roots::{find_roots_with, RootConfig};
use crate::sum::Neumaier;

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeConfig {
    /// Target bound on the truncation error of an archimedean escape rate.
    pub tol: f64,
    /// Iterations before declaring an archimedean orbit bounded.
    pub max_iterations: usize,
    /// Exact rational iteration stops once numerator plus denominator
    /// exceed this many bits.
    pub exact_bits: u64,
}

impl Default for EscapeConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_iterations: 10_000, exact_bits: 1 << 14 }
    }
}

/// Archimedean escape rate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchEscape {
    pub value: f64,
    pub error_bound: f64,
    pub iterations: usize,
    /// The orbit stayed inside `|z| ≤ R_c` for the whole budget; `value`
    /// is 0 and `error_bound` bounds the true rate.
    pub bounded: bool,
    /// An exact rational orbit revisited a point; `value` is exactly 0.
    pub preperiodic: bool,
}

fn escape_radius(c_abs: f64) -> f64 {
    (1.0 + libm::sqrt(1.0 + 4.0 * c_abs)) / 2.0
}

// Continues from |z_k| = e^L > R_c in log-polar form so nothing overflows:
// z_{k+1} = z_k²·(1 + c/z_k²), and the remaining correction is at most
// 2^{-k}·(−log(1 − |c|/|z_k|²)).
fn escaped(c: Complex64, mut l: f64, mut u: Complex64, mut k: usize, cfg: &EscapeConfig) -> ArchEscape {
    loop {
        let w = c * libm::exp(-2.0 * l) / (u * u);
        let tail = libm::ldexp(-libm::log1p(-w.norm()), -(k as i32));
        let value = libm::ldexp(l, -(k as i32));
        if tail <= cfg.tol || k >= 1000 {
            return ArchEscape {
                value,
                error_bound: tail + 4.0 * f64::EPSILON * value.abs(),
                iterations: k,
                bounded: false,
                preperiodic: false,
            };
        }
        let one_w = Complex64::new(1.0, 0.0) + w;
        l = 2.0 * l + libm::log(one_w.norm());
        u = u * u * one_w / one_w.norm();
        k += 1;
    }
}

fn bounded(c_abs: f64, k: usize) -> ArchEscape {
    let r = escape_radius(c_abs);
    // first escape after step k lands in |z| ≤ R² + |c|, and the rate there is
    // at most log(R² + |c|) + log 2
    let bound = libm::ldexp(libm::log(2.0 * (r * r + c_abs)), -(k as i32));
    ArchEscape { value: 0.0, error_bound: bound, iterations: k, bounded: true, preperiodic: false }
}

fn arch_from(c: Complex64, mut z: Complex64, start: usize, cfg: &EscapeConfig) -> ArchEscape {
    let r = escape_radius(c.norm());
    let mut k = start;
    loop {
        let m = z.norm();
        if m > r {
            return escaped(c, libm::log(m), z / m, k, cfg);
        }
        if k >= cfg.max_iterations || !m.is_finite() {
            return bounded(c.norm(), k);
        }
        z = z * z + c;
        k += 1;
    }
}

/// Archimedean escape rate at a complex point, in floating point.
pub fn escape_rate_arch(c: Complex64, x: Complex64, cfg: &EscapeConfig) -> ArchEscape {
    arch_from(c, x, 0, cfg)
}

/// Archimedean escape rate at a rational point. The orbit is followed
/// exactly while it is small, which detects preperiodic points (rate
/// exactly 0) and keeps the pre-escape phase free of rounding.
pub fn escape_rate_arch_rational(c: &BigRational, x: &BigRational, cfg: &EscapeConfig) -> ArchEscape {
    let cf = rational_to_f64(c);
    let cc = Complex64::new(cf, 0.0);
    let ln_r = libm::log(escape_radius(cf.abs()));
    let mut seen = BTreeSet::new();
    let mut z = x.clone();
    let mut k = 0;
    loop {
        let lz = ln_abs_rational(&z);
        if lz > ln_r {
            let u = Complex64::new(if z.is_negative() { -1.0 } else { 1.0 }, 0.0);
            return escaped(cc, lz, u, k, cfg);
        }
        if !seen.insert(z.clone()) {
            return ArchEscape { value: 0.0, error_bound: 0.0, iterations: k, bounded: true, preperiodic: true };
        }
        if k >= cfg.max_iterations {
            return bounded(cf.abs(), k);
        }
        if z.numer().bits() + z.denom().bits() > cfg.exact_bits {
            return arch_from(cc, Complex64::new(rational_to_f64(&z), 0.0), k, cfg);
        }
        z = &z * &z + c;
        k += 1;
    }
}

// λ_p at a point of valuation v (None for the point 0) in units of log p,
// when the outcome is decided by v alone.
fn finite_closed_form(gamma: Valuation, v: Option<&BigRational>) -> Option<BigRational> {
    match gamma {
        // good reduction: λ = max(0, −v)
        Valuation::Infinite => Some(v.map_or_else(BigRational::zero, |v| (-v).max(BigRational::zero()))),
        Valuation::Finite(g) if g >= 0 => Some(v.map_or_else(BigRational::zero, |v| (-v).max(BigRational::zero()))),
        Valuation::Finite(g) => {
            let t = BigRational::new(BigInt::from(g), BigInt::from(2));
            match v {
                Some(v) if *v < t => Some(-v),
                Some(v) if *v == t => None,
                _ => Some(-t),
            }
        }
    }
}

/// `λ_p` at an algebraic point known only through its valuation `v`
/// (`None` for the point 0). Fails on the critical line `v = v_p(c)/2` when
/// `c` has bad reduction, where cancellation decides the outcome.
pub fn escape_rate_finite_valuation(
    c: &BigRational,
    v: Option<&BigRational>,
    p: Prime,
) -> Result<LocalValue, HeightError> {
    finite_closed_form(vp(c, p), v)
        .map(|x| LocalValue::new(x, p))
        .ok_or(HeightError::UndecidedTie(p.get()))
}

/// `λ_p` at a rational point, iterating exactly through critical-line
/// cancellations.
pub fn escape_rate_finite(
    c: &BigRational,
    x: &BigRational,
    p: Prime,
    cfg: &EscapeConfig,
) -> Result<LocalValue, HeightError> {
    let gamma = vp(c, p);
    let mut z = x.clone();
    let mut seen = BTreeSet::new();
    let mut scale = BigInt::one();
    loop {
        let v = vp(&z, p).finite().map(BigInt::from).map(BigRational::from_integer);
        if let Some(lam) = finite_closed_form(gamma, v.as_ref()) {
            return Ok(LocalValue::new(lam / scale, p));
        }
        if !seen.insert(z.clone()) {
            return Ok(LocalValue::zero(p));
        }
        if z.numer().bits() + z.denom().bits() > cfg.exact_bits {
            return Err(HeightError::UndecidedTie(p.get()));
        }
        z = &z * &z + c;
        scale *= 2;
    }
}

/// Rejects a bounded-orbit result whose certificate is looser than `tol`.
pub fn certified(a: ArchEscape, cfg: &EscapeConfig) -> Result<ArchEscape, HeightError> {
    if a.bounded && !a.preperiodic && a.error_bound > cfg.tol {
        return Err(HeightError::BudgetExhausted { iterations: a.iterations, partial: a.value });
    }
    Ok(a)
}

/// A point of ℙ¹ at which to evaluate an escape rate.
#[derive(Debug, Clone, PartialEq)]
pub enum EscapePoint {
    Rational(BigRational),
    Complex(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Infinite,
    Finite(Prime),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalEscape {
    Arch(ArchEscape),
    Finite(LocalValue),
}

/// `λ_v(x)` for `f(z) = z² + c` at one place.
pub fn local_escape_rate(
    c: &BigRational,
    x: &EscapePoint,
    place: Place,
    cfg: &EscapeConfig,
) -> Result<LocalEscape, HeightError> {
    match (place, x) {
        (Place::Infinite, EscapePoint::Rational(x)) => Ok(LocalEscape::Arch(certified(escape_rate_arch_rational(c, x, cfg), cfg)?)),
        (Place::Infinite, EscapePoint::Complex(z)) => {
            let a = escape_rate_arch(Complex64::new(rational_to_f64(c), 0.0), *z, cfg);
            Ok(LocalEscape::Arch(certified(a, cfg)?))
        }
        (Place::Finite(p), EscapePoint::Rational(x)) => Ok(LocalEscape::Finite(escape_rate_finite(c, x, p, cfg)?)),
        (Place::Finite(_), EscapePoint::Complex(_)) => Err(HeightError::NeedsExactPoint),
    }
}

/// `ĥ_f(x)` with its per-place decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalHeight {
    pub degree: usize,
    pub arch: f64,
    pub arch_error: f64,
    pub finite: Vec<LocalValue>,
    /// Good-reduction places hidden in unfactored cofactors of `a_d`.
    pub unresolved: f64,
    pub total: f64,
    /// Exact orbit detection proved `x` preperiodic; every entry is 0.
    pub preperiodic: bool,
}

/// `ĥ(x) = (1/d)·Σ_v Σ_i λ_v(α_i)` over the roots `α_i` of `P`, the
/// minimal polynomial of `x` (irreducibility is the caller's concern).
pub fn canonical_height(c: &BigRational, p: &IntPoly, cfg: &EscapeConfig) -> Result<CanonicalHeight, HeightError> {
    let d = match p.degree() {
        None => return Err(HeightError::ZeroPolynomial),
        Some(0) => return Err(HeightError::Constant),
        Some(d) => d,
    };
    let p = p.primitive_part().map_err(|_| HeightError::ZeroPolynomial)?;
    let bad = relevant_primes(core::slice::from_ref(c.denom()), &[], DEFAULT_TRIAL_BOUND);
    if !bad.is_complete() {
        return Err(HeightError::IncompleteBadPrimes);
    }
    let lead = p.leading_coeff().expect("nonzero").clone();
    let places = relevant_primes(&[lead.clone(), c.denom().clone()], &[], DEFAULT_TRIAL_BOUND);
    let unresolved: f64 = places.unresolved.iter().map(ln_abs_bigint).sum();
    let df = d as f64;

    let (arch, arch_error, finite) = if d == 1 {
        let x = BigRational::new(-p.coeff(0), p.coeff(1));
        let a = certified(escape_rate_arch_rational(c, &x, cfg), cfg)?;
        if a.preperiodic {
            let finite = places.primes.iter().map(|&q| LocalValue::zero(q)).collect();
            return Ok(CanonicalHeight {
                degree: 1,
                arch: 0.0,
                arch_error: 0.0,
                finite,
                unresolved: 0.0,
                total: 0.0,
                preperiodic: true,
            });
        }
        let finite = places
            .primes
            .iter()
            .map(|&q| escape_rate_finite(c, &x, q, cfg))
            .collect::<Result<Vec<_>, _>>()?;
        (a.value, a.error_bound, finite)
    } else {
        let roots = find_roots_with(&p, &RootConfig::default())?;
        let cc = Complex64::new(rational_to_f64(c), 0.0);
        let mut err = Neumaier::new();
        let mut failed = None;
        let sum = roots.weighted_sum(|r| {
            let e = escape_rate_arch(cc, r.value, cfg);
            if let Err(e) = certified(e, cfg) {
                failed.get_or_insert(e);
            }
            err.add(r.multiplicity as f64 * e.error_bound);
            e.value
        });
        if let Some(e) = failed {
            return Err(e);
        }
        let zeros = p.trailing_zeros();
        let mut finite = Vec::with_capacity(places.primes.len());
        for &q in &places.primes {
            let mut acc = BigRational::zero();
            for (v, mult) in root_valuations(&newton_polygon(&p, q)) {
                acc += escape_rate_finite_valuation(c, Some(&v), q)?.coefficient_of_log_p * BigInt::from(mult);
            }
            if zeros > 0 {
                acc += escape_rate_finite_valuation(c, None, q)?.coefficient_of_log_p * BigInt::from(zeros);
            }
            finite.push(LocalValue::new(acc / BigInt::from(d), q));
        }
        (sum / df, err.value() / df, finite)
    };
    let finite_sum: f64 = finite.iter().map(LocalValue::to_f64).sum();
    let unresolved = unresolved / df;
    debug_assert!(places.unresolved.iter().all(|u| u.gcd(c.denom()).is_one()));
    Ok(CanonicalHeight {
        degree: d,
        arch,
        arch_error,
        finite,
        unresolved,
        total: arch + finite_sum + unresolved,
        preperiodic: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;
    use core::f64::consts::LN_2;

    fn cfg() -> EscapeConfig {
        EscapeConfig::default()
    }

    #[test]
    fn short_budget_is_reported() {
        let short = EscapeConfig { max_iterations: 3, ..cfg() };
        let p = IntPoly::from_i64s(&[1, 0, 1]);
        let e = canonical_height(&rational(0, 1), &p, &short).unwrap_err();
        assert!(matches!(e, HeightError::BudgetExhausted { iterations: 3, .. }));
        let x = EscapePoint::Rational(rational(1, 2));
        let e = local_escape_rate(&rational(-1, 4), &x, Place::Infinite, &short).unwrap_err();
        assert!(matches!(e, HeightError::BudgetExhausted { .. }));
    }

    #[test]
    fn arch_examples() {
        let e = escape_rate_arch_rational(&rational(0, 1), &rational(2, 1), &cfg());
        assert!((e.value - LN_2).abs() < 1e-15);
        let e = escape_rate_arch_rational(&rational(-1, 1), &rational(0, 1), &cfg());
        assert!(e.preperiodic && e.value == 0.0);
        let e = escape_rate_arch(Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0), &cfg());
        assert!(e.bounded && e.value == 0.0 && e.error_bound < 1e-300);
    }

    #[test]
    fn arch_against_exact_orbit() {
        // f^k(1) for c = 1 is an integer; compare with 2^{-k}·log f^k(1) at k = 12
        let mut z = BigInt::one();
        for _ in 0..12 {
            z = &z * &z + 1;
        }
        let oracle = ln_abs_bigint(&z) / 4096.0;
        let e = escape_rate_arch_rational(&rational(1, 1), &rational(1, 1), &cfg());
        assert!((e.value - oracle).abs() <= 1e-12, "{} {}", e.value, oracle);
        let f = escape_rate_arch(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), &cfg());
        assert!((f.value - oracle).abs() <= 1e-12);
    }

    #[test]
    fn finite_closed_forms() {
        let p2 = Prime::new(2).unwrap();
        let c = rational(1, 4); // v_2(c) = −2
        // v(x) = 0 > −1: λ = 1
        assert_eq!(escape_rate_finite(&c, &rational(1, 1), p2, &cfg()).unwrap().coefficient_of_log_p, rational(1, 1));
        // v(x) = −3 < −1: λ = 3
        assert_eq!(escape_rate_finite(&c, &rational(1, 8), p2, &cfg()).unwrap().coefficient_of_log_p, rational(3, 1));
        // tie at v = −1: x = 1/2 gives f(x) = 1/2, a fixed point
        assert!(escape_rate_finite(&c, &rational(1, 2), p2, &cfg()).unwrap().is_zero());
        assert_eq!(escape_rate_finite_valuation(&c, Some(&rational(-1, 1)), p2), Err(HeightError::UndecidedTie(2)));
        // c = −1/4, x = 1/2: f(x) = 0, f²(x) = −1/4 escapes with rate 2
        let c = rational(-1, 4);
        assert_eq!(escape_rate_finite(&c, &rational(1, 2), p2, &cfg()).unwrap().coefficient_of_log_p, rational(1, 2));
    }

    #[test]
    fn canonical_examples() {
        let h = canonical_height(&rational(0, 1), &IntPoly::linear_root(2), &cfg()).unwrap();
        assert!((h.total - LN_2).abs() < 1e-15);
        let h = canonical_height(&rational(-1, 1), &IntPoly::from_i64s(&[0, 1]), &cfg()).unwrap();
        assert!(h.preperiodic);
        assert_eq!(h.total, 0.0);
        let h = canonical_height(&rational(1, 1), &IntPoly::linear_root(1), &cfg()).unwrap();
        let mut z = BigInt::one();
        for _ in 0..10 {
            z = &z * &z + 1;
        }
        assert!((h.total - ln_abs_bigint(&z) / 1024.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_matches_weil_for_squaring() {
        // ĥ_{z²} is the Weil height, also for algebraic points
        let p = IntPoly::from_i64s(&[3, -1, 0, 5]);
        let h = canonical_height(&rational(0, 1), &p, &cfg()).unwrap();
        let w = super::super::weil_height(&p).unwrap();
        assert!((h.total - w.total).abs() < 1e-12, "{} {}", h.total, w.total);
    }

    #[test]
    fn functional_equation_algebraic() {
        // x = √2 has minimal polynomial T² − 2 and f(x) = 2 + c
        let c = rational(1, 3);
        let hx = canonical_height(&c, &IntPoly::from_i64s(&[-2, 0, 1]), &cfg()).unwrap();
        let fx = rational(7, 3);
        let p = IntPoly::new(alloc::vec![-fx.numer().clone(), fx.denom().clone()]);
        let hf = canonical_height(&c, &p, &cfg()).unwrap();
        assert!((hf.total - 2.0 * hx.total).abs() < 1e-9, "{} {}", hf.total, hx.total);
    }
}
