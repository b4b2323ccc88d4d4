//! Aberth–Ehrlich simultaneous iteration for a square-free integer
//! polynomial, followed by a double-double Newton polish and Weierstrass
//! inclusion radii.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use super::dd::{horner, Dd};
use super::{RootConfig, RootError};
use crate::poly::IntPoly;

const EPS: f64 = f64::EPSILON;
/// Unit roundoff of double-double Horner.
const DD_U: f64 = 1.232_595_164_407_831e-32; // 2^-106

/// Binary64 and double-double copies of a polynomial's coefficients and of
/// its reversal, all scaled by the same power of two.
pub(crate) struct Evaluator {
    d: usize,
    c: Vec<f64>,
    rev: Vec<f64>,
    cdd: Vec<Dd>,
    revdd: Vec<Dd>,
}

/// Value of `P(z)/S(z)` where `S(z) = Σ|a_k||z|^k`, plus the log-magnitude
/// pieces needed to reassemble `|P(z)|` without overflow.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Residual {
    /// `ln |P(z)|` in scaled coefficients.
    pub ln_abs: f64,
    /// `ln S(z)` in scaled coefficients.
    pub ln_scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        libm::exp(self.ln_abs - self.ln_scale)
    }
}

fn abs_horner(c: &[f64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * r + a.abs())
}

impl Evaluator {
    pub fn new(p: &IntPoly) -> Self {
        let shift = p.scale_shift();
        let dd: Vec<Dd> = p.to_dd_scaled(shift).into_iter().map(|(h, l)| Dd::new(h, l)).collect();
        let c: Vec<f64> = dd.iter().map(|x| x.hi).collect();
        let mut rev = c.clone();
        rev.reverse();
        let mut revdd = dd.clone();
        revdd.reverse();
        Evaluator { d: c.len() - 1, c, rev, cdd: dd, revdd }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `(P'/P)(z)`, or `None` when `P(z)` is exactly zero; the flag reports
    /// whether `|P(z)|` is at the rounding level of the evaluation.
    fn log_derivative(&self, z: Complex64) -> (Option<Complex64>, bool) {
        let d = self.d as f64;
        let small = |v: Complex64, s: f64| v.norm() <= 8.0 * d * EPS * s;
        if z.norm() <= 1.0 {
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for &a in self.c.iter().rev() {
                dp = dp * z + p;
                p = p * z + a;
            }
            let s = abs_horner(&self.c, z.norm());
            if p == Complex64::new(0.0, 0.0) {
                return (None, true);
            }
            (Some(dp / p), small(p, s))
        } else {
            let w = z.inv();
            let (mut r, mut dr) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for &a in self.rev.iter().rev() {
                dr = dr * w + r;
                r = r * w + a;
            }
            let s = abs_horner(&self.rev, w.norm());
            if r == Complex64::new(0.0, 0.0) {
                return (None, true);
            }
            (Some(w * (d - w * dr / r)), small(r, s))
        }
    }

    /// Residual with `P(z)` evaluated in double-double.
    pub fn residual(&self, z: Complex64) -> Residual {
        let r = z.norm();
        if r <= 1.0 {
            let v = horner(&self.cdd, z).to_c64().norm();
            let s = abs_horner(&self.c, r);
            Residual { ln_abs: ln_plus_err(v, s, self.d), ln_scale: libm::log(s) }
        } else {
            let w = z.inv();
            let v = horner(&self.revdd, w).to_c64().norm();
            let s = abs_horner(&self.rev, w.norm());
            let lz = self.d as f64 * libm::log(r);
            Residual { ln_abs: lz + ln_plus_err(v, s, self.d), ln_scale: lz + libm::log(s) }
        }
    }

    /// One Newton step computed with a double-double residual.
    fn newton_step(&self, z: Complex64) -> Option<Complex64> {
        if z.norm() <= 1.0 {
            let p = horner(&self.cdd, z).to_c64();
            let dp = self.c.iter().enumerate().skip(1).rev().fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| {
                acc * z + a * k as f64
            });
            if dp == Complex64::new(0.0, 0.0) {
                return None;
            }
            Some(z - p / dp)
        } else {
            let w = z.inv();
            let r = horner(&self.revdd, w).to_c64();
            let dr = self.rev.iter().enumerate().skip(1).rev().fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| {
                acc * w + a * k as f64
            });
            if dr == Complex64::new(0.0, 0.0) {
                return None;
            }
            let w1 = w - r / dr;
            if w1 == Complex64::new(0.0, 0.0) {
                return None;
            }
            Some(w1.inv())
        }
    }

    /// Relative residual with the double-double rounding bound folded in.
    fn relative_residual(&self, z: Complex64) -> f64 {
        self.residual(z).relative()
    }

    /// Newton polish; keeps an iterate only while the residual decreases and
    /// the step stays below `max_step`.
    pub fn polish(&self, mut z: Complex64, steps: usize, max_step: f64) -> Complex64 {
        let mut res = self.relative_residual(z);
        for _ in 0..steps {
            let Some(next) = self.newton_step(z) else { break };
            let step = (next - z).norm();
            if !next.re.is_finite() || !next.im.is_finite() || step > max_step {
                break;
            }
            let next_res = self.relative_residual(next);
            if next_res >= res {
                break;
            }
            z = next;
            res = next_res;
            if step <= EPS * z.norm() {
                break;
            }
        }
        z
    }
}

/// `ln(v + 4d·u·s)`: the computed magnitude inflated by the double-double
/// Horner error bound.
fn ln_plus_err(v: f64, s: f64, d: usize) -> f64 {
    libm::log(v + 4.0 * (d as f64 + 1.0) * DD_U * s)
}

/// Fujiwara's bound on the moduli of the roots, in log form.
fn ln_fujiwara(c: &[f64]) -> f64 {
    let d = c.len() - 1;
    let ln_lead = libm::log(c[d].abs());
    let mut best = f64::NEG_INFINITY;
    for k in 1..=d {
        let a = c[d - k].abs();
        if a == 0.0 {
            continue;
        }
        let a = if k == d { a / 2.0 } else { a };
        best = best.max((libm::log(a) - ln_lead) / k as f64);
    }
    core::f64::consts::LN_2 + best
}

/// Simultaneous iteration from a circle of Fujiwara radius.
fn iterate(ev: &Evaluator, phase: f64, cfg: &RootConfig) -> Result<Vec<Complex64>, RootError> {
    let d = ev.degree();
    let radius = libm::exp(ln_fujiwara(&ev.c)).clamp(libm::sqrt(f64::MIN_POSITIVE), libm::sqrt(f64::MAX));
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / d as f64 + phase))
        .collect();
    let mut done = vec![false; d];
    for _ in 0..cfg.max_iterations {
        let mut all = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (ld, tiny) = ev.log_derivative(z[k]);
            let Some(ld) = ld else {
                done[k] = true;
                continue;
            };
            let zk = z[k];
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != k {
                    s += (zk - zj).inv();
                }
            }
            let w = (ld - s).inv();
            if !w.re.is_finite() || !w.im.is_finite() {
                // coincident iterates; nudge apart
                z[k] = zk * Complex64::from_polar(1.0 + 1e-3, 1e-3 * (k as f64 + 1.0));
                all = false;
                continue;
            }
            z[k] = zk - w;
            if tiny || w.norm() <= 2.0 * EPS * z[k].norm() {
                done[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Ok(z);
        }
    }
    let worst = z.iter().map(|&x| ev.relative_residual(x)).fold(0.0, f64::max);
    Err(RootError::NoConvergence { iterations: cfg.max_iterations, residual: worst })
}

/// Roots of a square-free polynomial of degree ≥ 1 with their certified
/// inclusion radii.
pub(crate) fn solve_squarefree(p: &IntPoly, cfg: &RootConfig) -> Result<Vec<(Complex64, f64)>, RootError> {
    let ev = Evaluator::new(p);
    let d = ev.degree();
    let mut last_err = None;
    let mut z = None;
    for attempt in 0..3 {
        let phase = 0.4 + 0.9 * attempt as f64;
        match iterate(&ev, phase, cfg) {
            Ok(v) => {
                z = Some(v);
                break;
            }
            Err(e) => last_err = Some(e),
        }
    }
    let Some(mut z) = z else {
        return Err(last_err.expect("at least one attempt"));
    };

    // polish each root, never letting it travel a third of the way to its
    // nearest neighbour
    for k in 0..d {
        let nearest = (0..d)
            .filter(|&j| j != k)
            .map(|j| (z[j] - z[k]).norm())
            .fold(f64::INFINITY, f64::min);
        let cap = if nearest.is_finite() { nearest / 3.0 } else { f64::INFINITY };
        z[k] = ev.polish(z[k], cfg.polish_steps, cap);
    }

    let radii = inclusion_radii(&ev, &z);
    Ok(z.into_iter().zip(radii).collect())
}

/// Weierstrass inclusion radii `d·|P(z_i)| / |a_d Π_{j≠i}(z_i − z_j)|`,
/// merged over overlapping discs.
fn inclusion_radii(ev: &Evaluator, z: &[Complex64]) -> Vec<f64> {
    let d = z.len();
    let ln_lead = libm::log(ev.c[d].abs());
    let mut r: Vec<f64> = (0..d)
        .map(|i| {
            let res = ev.residual(z[i]);
            let ln_prod: f64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| libm::log((z[i] - z[j]).norm()))
                .sum();
            let ln_r = libm::log(d as f64) + res.ln_abs - ln_lead - ln_prod;
            // slack for the binary64 product of distances
            libm::exp(ln_r) * (1.0 + 8.0 * d as f64 * EPS)
        })
        .collect();

    // connected components of overlapping discs share an enclosing radius
    let mut comp: Vec<usize> = (0..d).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    let mut merged = false;
    for i in 0..d {
        for j in i + 1..d {
            if (z[i] - z[j]).norm() <= r[i] + r[j] {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                if a != b {
                    comp[a] = b;
                    merged = true;
                }
            }
        }
    }
    if merged {
        let roots: Vec<usize> = (0..d).map(|i| find(&mut comp, i)).collect();
        let snapshot = r.clone();
        for i in 0..d {
            let enclosing = (0..d)
                .filter(|&j| roots[j] == roots[i])
                .map(|j| (z[j] - z[i]).norm() + snapshot[j])
                .fold(0.0, f64::max);
            r[i] = enclosing;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fujiwara_bounds_roots() {
        // roots 1, 2, 3
        let c = [-6.0, 11.0, -6.0, 1.0];
        let b = libm::exp(ln_fujiwara(&c));
        assert!(b >= 3.0, "{b}");
    }

    #[test]
    fn solves_cubic() {
        let p = IntPoly::from_i64s(&[-6, 11, -6, 1]);
        let mut roots = solve_squarefree(&p, &RootConfig::default()).unwrap();
        roots.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
        for (k, (z, r)) in roots.iter().enumerate() {
            assert!((z - Complex64::new(k as f64 + 1.0, 0.0)).norm() <= r.max(1e-15) * 2.0);
            assert!(*r < 1e-12);
        }
    }
}
