//! Arithmetic heights as generalized Mahler measures.
//!
//! The crate is split by place: [`arch`] holds everything archimedean
//! (Jensen-formula Mahler measures, torus quadrature, Weil-metric Green
//! functions), [`padic`] holds the exact ultrametric side (valuations,
//! Newton polygons, Gauss norms). [`heights`] assembles global heights from
//! local pieces and [`equidist`] runs equidistribution experiments on
//! families of Galois orbits.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is pure and
//! deterministic; callers that want parallelism (the `heightlab` binary)
//! drive the row/slice level entry points themselves and recombine with the
//! same fixed-order reductions used here.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arch;
pub mod equidist;
pub mod heights;
pub mod numeric;
pub mod padic;
pub mod poly;
pub mod roots;
pub mod sum;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;

pub use poly::{parse_poly, parse_univariate, IntPoly, MultiPoly, PolyError, RatPoly};
pub use roots::{find_roots, find_roots_with, refine_root, RootConfig, RootError, RootSet};

