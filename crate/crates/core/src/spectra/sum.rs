//! Compensated summation with a reduction order that does not depend on the
//! number of threads.

use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

/// Width of the leaf ranges in [`blocked_sum`]. Part of the reproducibility
/// contract: changing it changes the rounding of every long sum.
pub const BLOCK: u64 = 1 << 16;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise [`Neumaier`] summation of complex numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = ComplexSum::default();
        for z in iter {
            s.add(z);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    iter.into_iter().collect::<ComplexSum>().value()
}

/// Sums `leaf(block)` over consecutive blocks of [`BLOCK`] indices covering
/// `range`. Leaves run in parallel; their results are combined left to right with
/// compensated summation, so the result is the same for every thread count.
pub fn blocked_sum<F>(range: Range<u64>, leaf: F) -> Complex64
where
    F: Fn(Range<u64>) -> Complex64 + Sync + Send,
{
    let parts: Vec<Complex64> = blocks(range).into_par_iter().map(leaf).collect();
    compensated_sum(parts)
}

/// Consecutive `BLOCK`-sized subranges of `range`.
pub fn blocks(range: Range<u64>) -> Vec<Range<u64>> {
    let mut out = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let hi = range.end.min(lo.saturating_add(BLOCK));
        out.push(lo..hi);
        lo = hi;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let mut s = Neumaier::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn blocked_sum_is_thread_independent() {
        let leaf = |r: Range<u64>| {
            compensated_sum(r.map(|n| Complex64::new((n as f64).sin(), 1.0 / (n as f64 + 1.0))))
        };
        let n = 5 * BLOCK + 123;
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| blocked_sum(0..n, leaf));
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| blocked_sum(0..n, leaf));
        assert_eq!(one.re.to_bits(), four.re.to_bits());
        assert_eq!(one.im.to_bits(), four.im.to_bits());
    }

    #[test]
    fn blocks_cover_range() {
        assert!(blocks(5..5).is_empty());
        let b = blocks(0..2 * BLOCK + 1);
        assert_eq!(b.len(), 3);
        assert_eq!(b[2], 2 * BLOCK..2 * BLOCK + 1);
    }
}
