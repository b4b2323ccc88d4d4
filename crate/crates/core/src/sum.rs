//! Compensated summation with a fixed reduction order.
//!
//! Every floating-point reduction in the crate goes through [`Neumaier`]
//! accumulators combined by [`pairwise`], so results do not depend on how a
//! caller splits work across threads as long as it keeps the same slices.

/// Neumaier (improved Kahan) running sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in, keeping both compensation terms.
    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for Neumaier {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        acc.extend(iter);
        acc
    }
}

/// Compensated sum of a slice, in slice order.
pub fn sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<Neumaier>().value()
}

/// Combines partial accumulators as a balanced binary tree over their
/// index order. The tree shape depends only on `parts.len()`.
pub fn pairwise(parts: &[Neumaier]) -> Neumaier {
    match parts.len() {
        0 => Neumaier::new(),
        1 => parts[0],
        n => {
            let mid = n / 2;
            let mut left = pairwise(&parts[..mid]);
            let right = pairwise(&parts[mid..]);
            left.merge(&right);
            left
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms() {
        let vals = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(sum(&vals), 2.0);
    }

    #[test]
    fn pairwise_is_independent_of_grouping_shape() {
        let vals: alloc::vec::Vec<f64> = (0..1000).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let parts: alloc::vec::Vec<Neumaier> = vals.chunks(7).map(|c| c.iter().copied().collect()).collect();
        let a = pairwise(&parts).value();
        let b = pairwise(&parts).value();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((a - sum(&vals)).abs() < 1e-14);
    }
}
