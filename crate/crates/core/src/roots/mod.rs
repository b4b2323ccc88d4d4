//! Certified complex roots of integer polynomials.
//!
//! [`find_roots`] strips the factor `T^k`, splits the rest into square-free
//! parts (so multiplicities are exact), runs Aberth–Ehrlich iteration on each
//! part, polishes every root with a double-double Newton step and attaches a
//! Weierstrass inclusion radius.

mod aberth;
mod dd;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::numeric::rational_to_f64;
use crate::poly::{squarefree_decomposition, IntPoly};
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("root finding needs a polynomial of degree at least 1")]
    Degenerate,
    #[error("no convergence after {iterations} iterations (worst relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("residual {residual:e} exceeds the target {target:e}")]
    ResidualTooLarge { residual: f64, target: f64 },
    #[error("derivative vanishes at {at}")]
    DerivativeVanishes { at: Complex64 },
    #[error("iteration converges linearly near {approx}: root of multiplicity about {multiplicity}")]
    MultipleRoot { approx: Complex64, multiplicity: u32 },
}

/// Knobs for [`find_roots_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct RootConfig {
    /// Bound on `|P(α)| / Σ|a_k||α|^k` accepted for every root.
    pub target_residual: f64,
    /// Aberth sweeps per attempt (three attempts with different start phases).
    pub max_iterations: usize,
    /// Double-double Newton steps per root after the Aberth phase.
    pub polish_steps: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { target_residual: 1e-12, max_iterations: 2000, polish_steps: 6 }
    }
}

/// One distinct root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: u32,
    /// The exact root lies within this distance of `value`.
    pub radius: f64,
}

/// All complex roots of an integer polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    roots: Vec<Root>,
    leading_coeff: BigInt,
    degree: usize,
    residual_bound: f64,
    radius_bound: f64,
}

impl RootSet {
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn leading_coeff(&self) -> &BigInt {
        &self.leading_coeff
    }

    /// Σ multiplicities.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Largest relative residual over the roots, each measured against the
    /// square-free factor it was computed from.
    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    /// Largest inclusion radius.
    pub fn radius_bound(&self) -> f64 {
        self.radius_bound
    }

    /// Roots repeated according to multiplicity.
    pub fn iter_with_multiplicity(&self) -> impl Iterator<Item = &Root> + '_ {
        self.roots
            .iter()
            .flat_map(|r| core::iter::repeat(r).take(r.multiplicity as usize))
    }

    /// The roots `β_i = α_i − a` of `P(T + a)`, given that `self` holds the
    /// roots of `p`.
    ///
    /// Roots within 1/2 of `a` are re-polished by Newton's method on the
    /// shifted polynomial, which resolves `β_i` to full relative precision
    /// even when `α_i` rounds to `a` in binary64. Expanding `P(T + a)` and
    /// solving it from scratch would not: its coefficients grow like
    /// `(1 + |a|)^d` and swamp the roots away from `a`.
    pub fn recentered(&self, p: &IntPoly, a: &BigRational) -> RootSet {
        let af = rational_to_f64(a);
        let q = p.shift_scaled(a);
        let ev = aberth::Evaluator::new(&q);
        let slack = f64::EPSILON * (af.abs() + 1.0);
        let roots = self
            .roots
            .iter()
            .map(|r| {
                let beta0 = r.value - af;
                if beta0.norm() >= 0.5 {
                    return Root { value: beta0, multiplicity: r.multiplicity, radius: r.radius + slack };
                }
                let cap = 2.0 * (r.radius + slack);
                let beta = ev.polish(beta0, 8, cap);
                Root { value: beta, multiplicity: r.multiplicity, radius: r.radius + slack + (beta - beta0).norm() }
            })
            .collect::<Vec<_>>();
        let radius_bound = roots.iter().map(|r| r.radius).fold(0.0, f64::max);
        RootSet {
            roots,
            leading_coeff: self.leading_coeff.clone(),
            degree: self.degree,
            residual_bound: self.residual_bound,
            radius_bound,
        }
    }

    /// Applies `f` to every root weighted by multiplicity and sums in a fixed
    /// order with compensation.
    pub fn weighted_sum<F: FnMut(&Root) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = crate::sum::Neumaier::new();
        for r in &self.roots {
            acc.add(r.multiplicity as f64 * f(r));
        }
        acc.value()
    }
}

/// [`find_roots_with`] with default iteration settings and the given residual
/// target.
pub fn find_roots(p: &IntPoly, target_residual: f64) -> Result<RootSet, RootError> {
    find_roots_with(p, &RootConfig { target_residual, ..RootConfig::default() })
}

pub fn find_roots_with(p: &IntPoly, cfg: &RootConfig) -> Result<RootSet, RootError> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(RootError::Degenerate),
    };
    let leading_coeff = p.leading_coeff().cloned().unwrap_or_default();
    let mut roots = Vec::new();
    let mut residual_bound: f64 = 0.0;

    let zeros = p.trailing_zeros();
    if zeros > 0 {
        roots.push(Root { value: Complex64::new(0.0, 0.0), multiplicity: zeros as u32, radius: 0.0 });
    }
    let rest = IntPoly::new(p.coeffs()[zeros..].to_vec());
    if rest.degree().unwrap_or(0) > 0 {
        for (factor, mult) in squarefree_decomposition(&rest) {
            if factor.degree() == Some(1) {
                let value = linear_root(&factor);
                let radius = value.norm() * f64::EPSILON;
                roots.push(Root { value, multiplicity: mult, radius });
                continue;
            }
            let ev = aberth::Evaluator::new(&factor);
            for (value, radius) in aberth::solve_squarefree(&factor, cfg)? {
                residual_bound = residual_bound.max(ev.residual(value).relative());
                roots.push(Root { value, multiplicity: mult, radius });
            }
        }
    }
    if residual_bound > cfg.target_residual {
        return Err(RootError::ResidualTooLarge { residual: residual_bound, target: cfg.target_residual });
    }
    let radius_bound = roots.iter().map(|r| r.radius).fold(0.0, f64::max);
    debug_assert_eq!(roots.iter().map(|r| r.multiplicity as usize).sum::<usize>(), degree);
    Ok(RootSet { roots, leading_coeff, degree, residual_bound, radius_bound })
}

fn linear_root(f: &IntPoly) -> Complex64 {
    let a = BigRational::new(-f.coeff(0), f.coeff(1));
    Complex64::new(rational_to_f64(&a), 0.0)
}

/// Newton refinement of a single root estimate with double-double
/// residuals.
///
/// Reports [`RootError::MultipleRoot`] when the iteration settles into
/// linear convergence, which is how Newton behaves at a multiple root.
pub fn refine_root(p: &IntPoly, approx: Complex64, steps: usize) -> Result<Complex64, RootError> {
    if p.degree().unwrap_or(0) < 1 {
        return Err(RootError::Degenerate);
    }
    let ev = aberth::Evaluator::new(p);
    let dp = p.derivative();
    let mut z = approx;
    let mut prev_step = f64::NAN;
    let mut linear_hits = 0;
    for _ in 0..steps {
        let res = ev.residual(z);
        if res.ln_abs == f64::NEG_INFINITY || res.relative() <= f64::EPSILON * f64::EPSILON {
            return Ok(z);
        }
        let d = dp.eval_complex(z);
        if d.is_zero() {
            return Err(RootError::DerivativeVanishes { at: z });
        }
        let pz = ev_value(p, z);
        let step = pz / d;
        let size = step.norm();
        z -= step;
        if size <= f64::EPSILON * z.norm() {
            return Ok(z);
        }
        if prev_step.is_finite() && prev_step > 0.0 {
            let ratio = size / prev_step;
            if (0.2..0.95).contains(&ratio) {
                linear_hits += 1;
                if linear_hits >= 3 {
                    let m = libm::round(1.0 / (1.0 - ratio)).max(2.0) as u32;
                    return Err(RootError::MultipleRoot { approx: z, multiplicity: m });
                }
            } else {
                linear_hits = 0;
            }
        }
        prev_step = size;
    }
    Ok(z)
}

fn ev_value(p: &IntPoly, z: Complex64) -> Complex64 {
    let shift = p.scale_shift();
    let c: Vec<dd::Dd> = p.to_dd_scaled(shift).into_iter().map(|(h, l)| dd::Dd::new(h, l)).collect();
    dd::horner(&c, z).to_c64() * libm::scalbn(1.0, shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(rs: &RootSet) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = rs.iter_with_multiplicity().map(|r| r.value).collect();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn recentering_resolves_roots_that_round_to_the_centre() {
        // (T^80 - 1)(T - 2) + 3 has a root 2 - 3/(2^80 - 1)·(1 + o(1))
        let mut c = alloc::vec![0i64; 82];
        c[0] = 5;
        c[1] = -1;
        c[80] = -2;
        c[81] = 1;
        let p = IntPoly::from_i64s(&c);
        let roots = find_roots(&p, 1e-12).unwrap();
        let shifted = roots.recentered(&p, &BigRational::from_integer(BigInt::from(2)));
        let near = shifted
            .roots()
            .iter()
            .map(|r| r.value)
            .min_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap();
        let predicted = -3.0 / libm::ldexp(1.0, 80);
        assert!(((near.re - predicted) / predicted).abs() < 1e-15, "{near}");
        assert!(near.im.abs() < 1e-40);
    }

    #[test]
    fn t_squared_plus_one() {
        let rs = find_roots(&IntPoly::from_i64s(&[1, 0, 1]), 1e-14).unwrap();
        let v = sorted(&rs);
        assert!((v[0] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((v[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(rs.residual_bound() < 1e-14);
    }

    #[test]
    fn linear() {
        let rs = find_roots(&IntPoly::from_i64s(&[-2, 1]), 1e-14).unwrap();
        assert_eq!(sorted(&rs), [Complex64::new(2.0, 0.0)]);
    }

    #[test]
    fn multiplicities_are_exact() {
        // T^2 (T - 1)^3 (T^2 + 2)
        let t = IntPoly::from_i64s(&[0, 1]);
        let p = &(&t.pow(2) * &IntPoly::from_i64s(&[-1, 1]).pow(3)) * &IntPoly::from_i64s(&[2, 0, 1]);
        let rs = find_roots(&p, 1e-12).unwrap();
        assert_eq!(rs.degree(), 7);
        let mults: Vec<(f64, u32)> = rs.roots().iter().map(|r| (r.value.re, r.multiplicity)).collect();
        assert!(mults.contains(&(0.0, 2)));
        assert!(mults.contains(&(1.0, 3)));
    }

    #[test]
    fn refine_examples() {
        let z = refine_root(&IntPoly::from_i64s(&[-2, 0, 1]), Complex64::new(1.4, 0.0), 20).unwrap();
        assert!((z.re - core::f64::consts::SQRT_2).abs() < 1e-15);
        let r = IntPoly::from_i64s(&[-2, 0, 1]).eval_complex(z).norm();
        assert!(r < 1e-15);

        match refine_root(&IntPoly::from_i64s(&[0, 0, 1]), Complex64::new(0.1, 0.0), 50) {
            Err(RootError::MultipleRoot { multiplicity, .. }) => assert_eq!(multiplicity, 2),
            Err(RootError::DerivativeVanishes { .. }) => {}
            other => panic!("double root not flagged: {other:?}"),
        }
    }

    #[test]
    fn degenerate_input() {
        assert_eq!(find_roots(&IntPoly::from_i64s(&[3]), 1e-12), Err(RootError::Degenerate));
        assert_eq!(find_roots(&IntPoly::zero(), 1e-12), Err(RootError::Degenerate));
    }
}
