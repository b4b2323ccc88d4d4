//! Double-double arithmetic, just enough for Horner evaluation of complex
//! polynomials at about 106 bits.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct ComplexDd {
    pub re: Dd,
    pub im: Dd,
}

impl ComplexDd {
    pub const ZERO: ComplexDd = ComplexDd { re: Dd::ZERO, im: Dd::ZERO };

    pub fn from_c64(z: Complex64) -> Self {
        ComplexDd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline]
    pub fn add_real(self, c: Dd) -> Self {
        ComplexDd { re: self.re.add(c), im: self.im }
    }

    #[inline]
    pub fn mul(self, o: ComplexDd) -> Self {
        ComplexDd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Horner evaluation of a real-coefficient polynomial (ascending order)
/// at a double point, carried in double-double.
pub(crate) fn horner(coeffs: &[Dd], z: Complex64) -> ComplexDd {
    let zd = ComplexDd::from_c64(z);
    coeffs
        .iter()
        .rev()
        .fold(ComplexDd::ZERO, |acc, &c| acc.mul(zd).add_real(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_lost_in_f64() {
        // (z - 1)^2 at z = 1 + 2^-30: f64 Horner loses everything, dd keeps it
        let c = [Dd::from_f64(1.0), Dd::from_f64(-2.0), Dd::from_f64(1.0)];
        let h = libm::scalbn(1.0, -30);
        let v = horner(&c, Complex64::new(1.0 + h, 0.0)).to_c64();
        assert_eq!(v.re, h * h);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn dd_mul_exact_product() {
        let a = Dd::from_f64(1.0 + f64::EPSILON);
        let p = a.mul(a);
        assert_eq!(p.hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }
}
