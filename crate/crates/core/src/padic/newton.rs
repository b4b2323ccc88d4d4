use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{vp_int, Prime};
use crate::poly::IntPoly;

/// One edge of a Newton polygon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub slope: BigRational,
    pub width: usize,
}

/// Lower convex hull of `(i, v_p(a_i))` over the nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NewtonPolygon {
    pub p: Prime,
    pub points: Vec<(usize, i64)>,
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Horizontal extent of the hull, the number of nonzero roots.
    pub fn width(&self) -> usize {
        match (self.vertices.first(), self.vertices.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0,
        }
    }
}

// (b - a) × (c - a) in exact integers
fn cross(a: (usize, i64), b: (usize, i64), c: (usize, i64)) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    (b.0 as i128 - ax) * (c.1 as i128 - ay) - (b.1 as i128 - ay) * (c.0 as i128 - ax)
}

/// Newton polygon of an integer polynomial. A rational polynomial can be
/// passed after clearing denominators: that shifts every valuation by the
/// same constant and leaves slopes unchanged.
pub fn newton_polygon(f: &IntPoly, p: Prime) -> NewtonPolygon {
    let points: Vec<(usize, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| vp_int(c, p).finite().map(|v| (i, v)))
        .collect();
    let mut vertices: Vec<(usize, i64)> = Vec::new();
    for &pt in &points {
        while vertices.len() >= 2 && cross(vertices[vertices.len() - 2], vertices[vertices.len() - 1], pt) <= 0 {
            vertices.pop();
        }
        vertices.push(pt);
    }
    let segments = vertices
        .windows(2)
        .map(|w| {
            let width = w[1].0 - w[0].0;
            Segment { slope: BigRational::new(BigInt::from(w[1].1 - w[0].1), BigInt::from(width)), width }
        })
        .collect();
    NewtonPolygon { p, points, vertices, segments }
}

/// `(v_p(α), multiplicity)` for the nonzero roots, one entry per segment:
/// valuation `−slope`, multiplicity the segment width.
pub fn root_valuations(np: &NewtonPolygon) -> Vec<(BigRational, usize)> {
    np.segments.iter().map(|s| (-s.slope.clone(), s.width)).collect()
}
