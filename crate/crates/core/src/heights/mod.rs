//! Global heights assembled from local pieces.
//!
//! [`weil_height`] splits `(1/d)·log M(P)` into an archimedean part and exact
//! finite-place parts, [`hypersurface_height`] integrates `log|F|` over the
//! torus, and [`canonical_height`] sums escape rates of `z ↦ z² + c` over
//! conjugates and places.

mod escape;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use escape::{
    canonical_height, certified, escape_rate_arch, escape_rate_arch_rational, escape_rate_finite,
    escape_rate_finite_valuation, local_escape_rate, ArchEscape, CanonicalHeight, EscapeConfig,
    EscapePoint, LocalEscape, Place,
};

use crate::arch::{mahler_quadrature, mahler_univariate_certified, ArchError};
use crate::numeric::ln_abs_bigint;
use crate::padic::{
    gauss_norm_exponent_multi, relevant_primes, vp_int, LocalValue, PadicError, DEFAULT_TRIAL_BOUND,
};
use crate::poly::{IntPoly, MultiPoly};
use crate::roots::RootError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HeightError {
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("height of a constant polynomial is undefined")]
    Constant,
    #[error("polynomial is not primitive")]
    NotPrimitive,
    #[error("no escape or boundedness certificate after {iterations} iterations (partial value {partial})")]
    BudgetExhausted { iterations: usize, partial: f64 },
    #[error("orbit valuation stays on the critical line v = v_p(c)/2 at p = {0}")]
    UndecidedTie(u64),
    #[error("finite-place escape rates need an exact point, not a complex approximation")]
    NeedsExactPoint,
    #[error("could not factor the denominator of c below the trial-division bound")]
    IncompleteBadPrimes,
}

/// Per-place decomposition of a height.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightBreakdown {
    pub degree: usize,
    pub arch: f64,
    /// Bound on the numerical error of `arch` (a heuristic for quadrature).
    pub arch_error: f64,
    pub finite: Vec<LocalValue>,
    /// Contribution of finite places hidden in cofactors that trial
    /// division could not split. Zero when the place set is complete.
    pub unresolved: f64,
    pub total: f64,
    /// Set when the input was divided by its content first.
    pub normalized: bool,
}

impl HeightBreakdown {
    pub fn finite_sum(&self) -> f64 {
        self.finite.iter().map(LocalValue::to_f64).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.unresolved == 0.0
    }
}

/// `h(α) = (1/d)·log M(P)` for the primitive polynomial `P` of `α`
/// (irreducibility not required: the result is the average over all roots).
pub fn weil_height(p: &IntPoly) -> Result<HeightBreakdown, HeightError> {
    let d = match p.degree() {
        None => return Err(HeightError::ZeroPolynomial),
        Some(0) => return Err(HeightError::Constant),
        Some(d) => d,
    };
    let normalized = !p.is_primitive();
    let p = if normalized { p.primitive_part().map_err(|_| HeightError::ZeroPolynomial)? } else { p.clone() };
    let m = mahler_univariate_certified(&p)?;
    let df = d as f64;
    let total = m.log_mahler / df;
    let lead = p.leading_coeff().expect("nonzero").clone();
    let rp = relevant_primes(core::slice::from_ref(&lead), &[], DEFAULT_TRIAL_BOUND);
    let finite: Vec<LocalValue> = rp
        .primes
        .iter()
        .map(|&q| {
            let v = vp_int(&lead, q).finite().unwrap_or(0);
            LocalValue::new(BigRational::new(BigInt::from(v), BigInt::from(d)), q)
        })
        .collect();
    let unresolved = rp.unresolved.iter().map(ln_abs_bigint).sum::<f64>() / df;
    let finite_sum: f64 = finite.iter().map(LocalValue::to_f64).sum();
    Ok(HeightBreakdown {
        degree: d,
        arch: total - finite_sum - unresolved,
        arch_error: m.error_bound / df,
        finite,
        unresolved,
        total,
        normalized,
    })
}

/// Height of the hypersurface `F = 0` in ℙⁿ for the Weil metric: the torus
/// Mahler measure of a primitive homogeneous `F`. Finite places contribute
/// zero; entries are recorded for the primes dividing some coefficient.
pub fn hypersurface_height(f: &MultiPoly, n: usize) -> Result<HeightBreakdown, HeightError> {
    if f.is_zero() {
        return Err(HeightError::ZeroPolynomial);
    }
    if !f.is_primitive() {
        return Err(HeightError::NotPrimitive);
    }
    let q = mahler_quadrature(f, n)?;
    let coeffs: Vec<BigInt> = f.terms().map(|(_, c)| c.clone()).collect();
    let rp = relevant_primes(&coeffs, &[], DEFAULT_TRIAL_BOUND);
    let mut finite = Vec::with_capacity(rp.primes.len());
    for &p in &rp.primes {
        debug_assert_eq!(gauss_norm_exponent_multi(f, p), Ok(0));
        finite.push(LocalValue::zero(p));
    }
    Ok(HeightBreakdown {
        degree: f.homogeneous_degree().unwrap_or(0) as usize,
        arch: q.estimate,
        arch_error: q.error_estimate,
        finite,
        unresolved: 0.0,
        total: q.estimate,
        normalized: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, rational};
    use core::f64::consts::LN_2;

    #[test]
    fn weil_examples() {
        let h = weil_height(&IntPoly::linear_root(2)).unwrap();
        assert!((h.total - LN_2).abs() < 1e-15 && h.finite.is_empty());
        assert_eq!(weil_height(&IntPoly::from_i64s(&[0, 1])).unwrap().total, 0.0);
        let h = weil_height(&IntPoly::from_i64s(&[-1, 2])).unwrap();
        assert!((h.total - LN_2).abs() < 1e-15);
        assert_eq!(h.arch, 0.0);
        assert_eq!(h.finite.len(), 1);
        assert_eq!(h.finite[0].coefficient_of_log_p, rational(1, 1));
        assert_eq!(h.finite[0].p.get(), 2);
        assert_eq!(weil_height(&IntPoly::from_i64s(&[3])), Err(HeightError::Constant));
    }

    #[test]
    fn non_primitive_input_is_normalized() {
        let h = weil_height(&IntPoly::from_i64s(&[-2, 4])).unwrap();
        assert!(h.normalized);
        assert!((h.total - LN_2).abs() < 1e-15);
    }

    #[test]
    fn breakdown_adds_up() {
        let p = IntPoly::from_i64s(&[3, -7, 0, 12]);
        let h = weil_height(&p).unwrap();
        assert!((h.arch + h.finite_sum() + h.unresolved - h.total).abs() < 1e-14);
        assert!(h.arch >= 0.0);
    }

    #[test]
    fn hypersurface_examples() {
        let h = hypersurface_height(&parse_poly("x0", &["x0", "x1"]).unwrap(), 16).unwrap();
        assert!(h.total.abs() < 1e-15);
        let h = hypersurface_height(&parse_poly("x1 - 2*x0", &["x0", "x1"]).unwrap(), 64).unwrap();
        assert!((h.total - LN_2).abs() < 1e-6);
        assert_eq!(h.finite.len(), 1);
        assert!(h.finite[0].is_zero());
        assert_eq!(
            hypersurface_height(&parse_poly("2*x1 - 2*x0", &["x0", "x1"]).unwrap(), 16),
            Err(HeightError::NotPrimitive)
        );
    }
}
