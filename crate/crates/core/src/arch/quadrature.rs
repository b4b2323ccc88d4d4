//! Tensor trapezoid rule on the real torus for `∫ log|F(e^{iθ})| dθ/(2π)^n`.
//!
//! Nodes sit at half-integer angles `θ_k = π(2k+1)/N`, so each exponent's
//! phase is an exact table lookup `(2k+1)·e mod 2N`. The rule is spectrally
//! accurate for smooth periodic integrands; near zeros of `F` on the torus it
//! degrades gracefully and the grid-doubling difference reports it.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::ArchError;
use crate::numeric::bigint_to_dd_scaled;
use crate::poly::MultiPoly;
use crate::sum::{pairwise, Neumaier};

/// Nodes with `|F|` below this are dropped and counted.
pub const DROP_THRESHOLD: f64 = 1e-300;

/// Outcome of [`mahler_quadrature`](super::mahler_quadrature).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// Estimate on the refined `2N` grid.
    pub estimate: f64,
    /// `|Q_N − Q_2N|`, a heuristic rather than a rigorous bound.
    pub error_estimate: f64,
    /// Nodes of the refined grid where `|F|` underflowed the drop threshold.
    pub nodes_dropped: u64,
}

/// Partial sum over one slice of the grid (fixed first angle).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SliceSum {
    pub acc: Neumaier,
    pub kept: u64,
    pub dropped: u64,
}

/// Trapezoid grid for an affine polynomial in `dims` variables.
#[derive(Debug, Clone)]
pub struct TorusGrid {
    n: usize,
    dims: usize,
    terms: Vec<(f64, Vec<u32>)>,
    table: Vec<Complex64>,
    ln_scale: f64,
}

impl TorusGrid {
    /// `n` nodes per axis; must be a power of two, at least 4.
    pub fn new(f: &MultiPoly, n: usize) -> Result<Self, ArchError> {
        if n < 4 || !n.is_power_of_two() {
            return Err(ArchError::BadGrid(n));
        }
        if f.is_zero() {
            return Err(ArchError::ZeroPolynomial);
        }
        let shift = f.terms().map(|(_, c)| c.bits() as i64).max().unwrap_or(0);
        let terms = f
            .terms()
            .map(|(e, c)| (bigint_to_dd_scaled(c, shift).0, e.to_vec()))
            .collect();
        let table = (0..2 * n)
            .map(|m| Complex64::from_polar(1.0, PI * m as f64 / n as f64))
            .collect();
        Ok(TorusGrid {
            n,
            dims: f.nvars(),
            terms,
            table,
            ln_scale: shift as f64 * core::f64::consts::LN_2,
        })
    }

    /// Number of independent slices (`N`, or 1 for a constant with no axes).
    pub fn slices(&self) -> usize {
        if self.dims == 0 {
            1
        } else {
            self.n
        }
    }

    #[inline]
    fn eval(&self, idx: &[usize]) -> Complex64 {
        let two_n = 2 * self.n;
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, e) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for (&k, &ex) in idx.iter().zip(e) {
                if ex != 0 {
                    let m = ((2 * k + 1) as u64 * ex as u64 % two_n as u64) as usize;
                    t *= self.table[m];
                }
            }
            acc += t;
        }
        acc
    }

    /// Sums `log|F|` over every node whose first angle index is `k0`.
    pub fn slice(&self, k0: usize) -> SliceSum {
        let mut out = SliceSum::default();
        let mut idx = vec![0usize; self.dims];
        if self.dims > 0 {
            idx[0] = k0;
        }
        loop {
            let v = self.eval(&idx).norm();
            if v < DROP_THRESHOLD {
                out.dropped += 1;
            } else {
                out.acc.add(libm::log(v));
                out.kept += 1;
            }
            // odometer over axes 1..dims
            let mut axis = self.dims;
            loop {
                if axis <= 1 {
                    return out;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < self.n {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }

    /// Mean of `log|F|` over the kept nodes, from slices in index order.
    pub fn finish(&self, parts: &[SliceSum]) -> Result<(f64, u64), ArchError> {
        let accs: Vec<Neumaier> = parts.iter().map(|p| p.acc).collect();
        let kept: u64 = parts.iter().map(|p| p.kept).sum();
        let dropped: u64 = parts.iter().map(|p| p.dropped).sum();
        if kept == 0 {
            return Err(ArchError::AllNodesDropped);
        }
        Ok((pairwise(&accs).value() / kept as f64 + self.ln_scale, dropped))
    }

    /// Sequential evaluation of every slice.
    pub fn integrate(&self) -> Result<(f64, u64), ArchError> {
        let parts: Vec<SliceSum> = (0..self.slices()).map(|k| self.slice(k)).collect();
        self.finish(&parts)
    }
}

impl QuadratureResult {
    /// Combines a coarse (`N`) and a refined (`2N`) integration.
    pub fn from_grids(coarse: (f64, u64), fine: (f64, u64)) -> Self {
        QuadratureResult {
            estimate: fine.0,
            error_estimate: (coarse.0 - fine.0).abs(),
            nodes_dropped: fine.1,
        }
    }
}
