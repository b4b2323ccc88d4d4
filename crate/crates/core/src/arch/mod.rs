//! Archimedean local quantities.
//!
//! Mahler measures via Jensen's formula on certified roots, torus quadrature
//! of `log|F|`, the Weil-metric Green function `log‖s‖⁻¹` of a divisor and
//! its integrals against empirical (Galois orbit) and equilibrium (Haar on
//! the unit circle) measures.

mod quadrature;

use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

pub use quadrature::{QuadratureResult, SliceSum, TorusGrid, DROP_THRESHOLD};

use crate::numeric::{ln_abs_bigint, rational_to_f64};
use crate::poly::{IntPoly, MultiPoly, PolyError};
use crate::roots::{find_roots_with, RootConfig, RootError, RootSet};
use crate::sum::Neumaier;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArchError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("grid size {0} must be a power of two and at least 4")]
    BadGrid(usize),
    #[error("every quadrature node was dropped")]
    AllNodesDropped,
    #[error("orbit point {0} lies on the divisor and no truncation was given")]
    MeetsDivisor(Complex64),
    #[error("empirical integrals on the projective line need a divisor in at most two variables")]
    UnsupportedDivisor,
}

/// `log M(P)` with a bound on its numerical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MahlerMeasure {
    pub log_mahler: f64,
    pub error_bound: f64,
}

/// `log M(P) = log|a_d| + Σ log max(1, |α_i|)`.
pub fn mahler_univariate(p: &IntPoly) -> Result<f64, ArchError> {
    Ok(mahler_univariate_certified(p)?.log_mahler)
}

/// As [`mahler_univariate`], with the error bound propagated from the root
/// inclusion radii. Degrees 0 and 1 are exact.
pub fn mahler_univariate_certified(p: &IntPoly) -> Result<MahlerMeasure, ArchError> {
    let exact = |v| Ok(MahlerMeasure { log_mahler: v, error_bound: 0.0 });
    match p.degree() {
        None => Err(ArchError::ZeroPolynomial),
        Some(0) => exact(ln_abs_bigint(&p.coeff(0))),
        Some(1) => {
            let (a0, a1) = (ln_abs_bigint(&p.coeff(0)), ln_abs_bigint(&p.coeff(1)));
            exact(a0.max(a1))
        }
        Some(_) => {
            let roots = find_roots_with(p, &RootConfig::default())?;
            Ok(mahler_from_roots(&roots))
        }
    }
}

/// Jensen's formula on an already computed root set.
pub fn mahler_from_roots(roots: &RootSet) -> MahlerMeasure {
    let mut err = Neumaier::new();
    let sum = roots.weighted_sum(|r| {
        let m = r.value.norm();
        if m + r.radius > 1.0 {
            err.add(r.multiplicity as f64 * r.radius / (m - r.radius).max(1.0));
        }
        log_plus(m)
    });
    MahlerMeasure { log_mahler: ln_abs_bigint(roots.leading_coeff()) + sum, error_bound: err.value() }
}

#[inline]
pub(crate) fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        libm::log(x)
    } else {
        0.0
    }
}

/// Polycircle integral of `log|F(1, e^{iθ_1}, …, e^{iθ_n})|` for a
/// homogeneous `F` in `n + 1` variables, on `N` and `2N` grids.
pub fn mahler_quadrature(f: &MultiPoly, n: usize) -> Result<QuadratureResult, ArchError> {
    let (coarse, fine) = quadrature_grids(f, n)?;
    Ok(QuadratureResult::from_grids(coarse.integrate()?, fine.integrate()?))
}

/// The coarse and refined grids [`mahler_quadrature`] integrates over, for
/// callers that evaluate slices themselves.
pub fn quadrature_grids(f: &MultiPoly, n: usize) -> Result<(TorusGrid, TorusGrid), ArchError> {
    if f.is_zero() {
        return Err(ArchError::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(ArchError::NotHomogeneous);
    }
    if f.nvars() == 0 {
        return Err(ArchError::Poly(PolyError::VariableOutOfRange { index: 0, nvars: 0 }));
    }
    let affine = f.dehomogenize(0)?;
    Ok((TorusGrid::new(&affine, n)?, TorusGrid::new(&affine, 2 * n)?))
}

/// Grids for the Mahler measure of any nonzero `F`: a homogeneous `F` is
/// dehomogenized at `x_0` first (the measure is unchanged and the grid
/// loses a dimension), anything else is integrated over the full torus.
pub fn torus_grids(f: &MultiPoly, n: usize) -> Result<(TorusGrid, TorusGrid), ArchError> {
    if f.is_homogeneous() && f.nvars() > 0 {
        return quadrature_grids(f, n);
    }
    Ok((TorusGrid::new(f, n)?, TorusGrid::new(f, 2 * n)?))
}

/// Circle quadrature of `log|P(e^{iθ})|` for a univariate `P`.
pub fn mahler_quadrature_univariate(p: &IntPoly, n: usize) -> Result<QuadratureResult, ArchError> {
    if p.is_zero() {
        return Err(ArchError::ZeroPolynomial);
    }
    let f = p.to_multi();
    let coarse = TorusGrid::new(&f, n)?.integrate()?;
    let fine = TorusGrid::new(&f, 2 * n)?.integrate()?;
    Ok(QuadratureResult::from_grids(coarse, fine))
}

/// Metrics on `O(m)` supported for Green functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    /// `‖s‖(x) = |F(x)| / max_i |x_i|^m`.
    #[default]
    WeilStandard,
}

/// Which of `log‖s‖⁻¹` (the Green function) or `log‖s‖` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreenSign {
    #[default]
    Inverse,
    Direct,
}

impl GreenSign {
    fn apply(self, v: f64) -> f64 {
        match self {
            GreenSign::Inverse => v,
            GreenSign::Direct => -v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divisor {
    /// `G(T)` on the affine coordinate `T = x_1/x_0`, viewed in degree `deg G`.
    Univariate(IntPoly),
    /// Homogeneous `G(x_0, …, x_n)`.
    Homogeneous(MultiPoly),
}

/// The section whose Green function is evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreenSpec {
    pub divisor: Divisor,
    pub metric: Metric,
    pub sign: GreenSign,
}

impl GreenSpec {
    /// `log‖G‖⁻¹` for the standard Weil metric.
    pub fn new(g: IntPoly) -> Result<Self, ArchError> {
        if g.is_zero() {
            return Err(ArchError::ZeroPolynomial);
        }
        Ok(Self { divisor: Divisor::Univariate(g), metric: Metric::WeilStandard, sign: GreenSign::Inverse })
    }

    pub fn homogeneous(g: MultiPoly) -> Result<Self, ArchError> {
        if g.is_zero() {
            return Err(ArchError::ZeroPolynomial);
        }
        if !g.is_homogeneous() {
            return Err(ArchError::NotHomogeneous);
        }
        Ok(Self { divisor: Divisor::Homogeneous(g), metric: Metric::WeilStandard, sign: GreenSign::Inverse })
    }

    pub fn with_sign(mut self, sign: GreenSign) -> Self {
        self.sign = sign;
        self
    }

    /// The divisor as a polynomial in the affine coordinate of ℙ¹.
    pub fn univariate(&self) -> Result<IntPoly, ArchError> {
        match &self.divisor {
            Divisor::Univariate(g) => Ok(g.clone()),
            Divisor::Homogeneous(g) if g.nvars() == 2 => Ok(g.dehomogenize(0)?.to_univariate()?),
            Divisor::Homogeneous(_) => Err(ArchError::UnsupportedDivisor),
        }
    }

    fn degree(&self) -> u32 {
        match &self.divisor {
            Divisor::Univariate(g) => g.degree().unwrap_or(0) as u32,
            Divisor::Homogeneous(g) => g.homogeneous_degree().unwrap_or(0),
        }
    }
}

/// `ln|G(t)| − m·ln max(1, |t|)` for `deg G ≤ m`, computed through the
/// reversed polynomial outside the unit disc so nothing overflows.
fn ln_norm_affine(g: &IntPoly, m: u32, t: Complex64) -> f64 {
    let r = t.norm();
    if r <= 1.0 {
        libm::log(g.eval_complex(t).norm())
    } else {
        // G(t) = t^m · Σ a_k t^{k−m}
        let deg = g.degree().unwrap_or(0) as u32;
        let rev = g.reversed();
        let w = t.inv();
        let lead_gap = (m - deg) as f64;
        libm::log(rev.eval_complex(w).norm()) - lead_gap * libm::log(r)
    }
}

/// Weil-metric Green function at an affine point `t` of ℙ¹:
/// `log‖s‖⁻¹(t) = m·log max(1,|t|) − log|G(t)|` (negated for
/// [`GreenSign::Direct`]). `+∞` on the divisor.
pub fn green_eval(spec: &GreenSpec, t: Complex64) -> f64 {
    let v = match &spec.divisor {
        Divisor::Univariate(g) => -ln_norm_affine(g, spec.degree(), t),
        Divisor::Homogeneous(_) => green_eval_projective(spec, &[Complex64::new(1.0, 0.0), t]),
    };
    spec.sign.apply(v)
}

/// Green function at a projective point given by homogeneous coordinates.
pub fn green_eval_projective(spec: &GreenSpec, x: &[Complex64]) -> f64 {
    let v = match &spec.divisor {
        Divisor::Homogeneous(g) => {
            let big = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let scaled: Vec<Complex64> = x.iter().map(|z| z / big).collect();
            // F(x/max|x_i|) = F(x)/max|x_i|^m
            -libm::log(g.eval_complex(&scaled).norm())
        }
        Divisor::Univariate(g) => {
            let t = x[1] / x[0];
            if x[0].is_zero() {
                // point at infinity: ‖s‖ = |leading coefficient| when deg G = m
                return spec.sign.apply(-ln_abs_bigint(g.leading_coeff().unwrap_or(&Zero::zero())));
            }
            -ln_norm_affine(g, spec.degree(), t)
        }
    };
    spec.sign.apply(v)
}

/// `(1/d)·Σ mult·φ(α_i)` with `φ = green_eval`, truncated to `min(B, φ)`
/// when `truncation = Some(B)`.
pub fn empirical_integral_arch(
    orbit: &RootSet,
    spec: &GreenSpec,
    truncation: Option<f64>,
) -> Result<f64, ArchError> {
    let d = orbit.degree() as f64;
    let mut bad = None;
    let s = orbit.weighted_sum(|r| {
        let v = green_eval(spec, r.value);
        apply_truncation(v, truncation).unwrap_or_else(|| {
            bad.get_or_insert(r.value);
            0.0
        })
    });
    match bad {
        Some(z) => Err(ArchError::MeetsDivisor(z)),
        None => Ok(s / d),
    }
}

fn apply_truncation(v: f64, truncation: Option<f64>) -> Option<f64> {
    match truncation {
        Some(b) => Some(if v.is_nan() { b } else { v.min(b) }),
        None if v.is_finite() => Some(v),
        None => None,
    }
}

/// The same integral, from the roots `β_i = α_i − a` of `P(T + a)`.
///
/// When the divisor passes through (or near) the rational point `a`, the
/// Green function's singular factor is evaluated at `β_i` directly, which
/// keeps full relative accuracy for orbit points exponentially close to `a`.
pub fn empirical_integral_arch_centered(
    shifted_orbit: &RootSet,
    center: &BigRational,
    spec: &GreenSpec,
    truncation: Option<f64>,
) -> Result<f64, ArchError> {
    let g = spec.univariate()?;
    let m = spec.degree();
    let (den, g_shift) = g.shift(center).clear_denominators();
    let ln_den = ln_abs_bigint(&den);
    let a = rational_to_f64(center);
    let d = shifted_orbit.degree() as f64;
    let mut bad = None;
    let s = shifted_orbit.weighted_sum(|r| {
        let beta = r.value;
        let alpha = beta + a;
        // log|G(α)| = log|G_a(β)| with G_a = g_shift / den
        let ln_g = ln_norm_affine(&g_shift, g_shift.degree().unwrap_or(0) as u32, beta)
            + g_shift.degree().unwrap_or(0) as f64 * log_plus(beta.norm())
            - ln_den;
        let v = spec.sign.apply(m as f64 * log_plus(alpha.norm()) - ln_g);
        apply_truncation(v, truncation).unwrap_or_else(|| {
            bad.get_or_insert(alpha);
            0.0
        })
    });
    match bad {
        Some(z) => Err(ArchError::MeetsDivisor(z)),
        None => Ok(s / d),
    }
}

/// `∫ log‖s‖⁻¹ dHaar` over `|t| = 1`, which is `−log M(G)` for the Weil metric.
pub fn equilibrium_integral_circle(spec: &GreenSpec) -> Result<f64, ArchError> {
    let g = spec.univariate()?;
    Ok(spec.sign.apply(-mahler_univariate(&g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use core::f64::consts::LN_2;

    #[test]
    fn green_examples() {
        let spec = GreenSpec::new(IntPoly::linear_root(2)).unwrap();
        assert!((green_eval(&spec, Complex64::new(0.0, 0.0)) + LN_2).abs() < 1e-15);
        assert!((green_eval(&spec, Complex64::new(3.0, 0.0)) - libm::log(3.0)).abs() < 1e-15);
        assert_eq!(green_eval(&spec, Complex64::new(2.0, 0.0)), f64::INFINITY);
        let direct = spec.clone().with_sign(GreenSign::Direct);
        assert!((green_eval(&direct, Complex64::new(3.0, 0.0)) + libm::log(3.0)).abs() < 1e-15);
    }

    #[test]
    fn green_far_from_origin_does_not_overflow() {
        let spec = GreenSpec::new(IntPoly::from_i64s(&[1, 0, 0, 0, 0, 1])).unwrap();
        let v = green_eval(&spec, Complex64::new(1e100, 0.0));
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn homogeneous_green_matches_affine() {
        let h = parse_poly("x1 - 2*x0", &["x0", "x1"]).unwrap();
        let hs = GreenSpec::homogeneous(h).unwrap();
        let us = GreenSpec::new(IntPoly::linear_root(2)).unwrap();
        for t in [Complex64::new(0.3, 0.1), Complex64::new(-5.0, 2.0)] {
            assert!((green_eval(&hs, t) - green_eval(&us, t)).abs() < 1e-14);
        }
        assert_eq!(
            GreenSpec::homogeneous(parse_poly("x0 + 1", &["x0"]).unwrap()),
            Err(ArchError::NotHomogeneous)
        );
    }

    #[test]
    fn mahler_examples() {
        assert!((mahler_univariate(&IntPoly::linear_root(2)).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(mahler_univariate(&IntPoly::from_i64s(&[0, 0, 0, 1])).unwrap(), 0.0);
        assert_eq!(mahler_univariate(&IntPoly::zero()), Err(ArchError::ZeroPolynomial));
    }

    #[test]
    fn equilibrium_examples() {
        let e = |c: &[i64]| equilibrium_integral_circle(&GreenSpec::new(IntPoly::from_i64s(c)).unwrap()).unwrap();
        assert!((e(&[-2, 1]) + LN_2).abs() < 1e-15);
        assert_eq!(e(&[0, 1]), 0.0);
        assert!(e(&[0, -1, 1]).abs() < 1e-15);
    }

    #[test]
    fn quadrature_trivial() {
        let f = parse_poly("x1", &["x0", "x1"]).unwrap();
        let q = mahler_quadrature(&f, 16).unwrap();
        assert!(q.estimate.abs() < 1e-15);
        assert_eq!(q.nodes_dropped, 0);
        assert_eq!(mahler_quadrature(&f, 12), Err(ArchError::BadGrid(12)));
        let g = parse_poly("x1 + 1", &["x0", "x1"]).unwrap();
        assert_eq!(mahler_quadrature(&g, 16), Err(ArchError::NotHomogeneous));
    }

    #[test]
    fn truncation_caps_singular_values() {
        let orbit = crate::find_roots(&IntPoly::from_i64s(&[-2, 1]), 1e-12).unwrap();
        let spec = GreenSpec::new(IntPoly::linear_root(2)).unwrap();
        assert!(matches!(empirical_integral_arch(&orbit, &spec, None), Err(ArchError::MeetsDivisor(_))));
        assert_eq!(empirical_integral_arch(&orbit, &spec, Some(5.0)).unwrap(), 5.0);
    }
}
