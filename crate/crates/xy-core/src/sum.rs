//! Deterministic summation helpers.
//!
//! Mode sums can mix magnitudes across several orders; plain left-to-right
//! accumulation is neither accurate nor stable under re-blocking. Pairwise
//! summation keeps the error at O(log n) rounding steps and a fixed
//! evaluation order keeps results bit-reproducible.

/// Recursive pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BASE: usize = 32;
    if xs.len() <= BASE {
        let mut acc = KahanSum::new();
        for &x in xs {
            acc.add(x);
        }
        acc.value()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_beats_naive_on_mixed_magnitudes() {
        // 1 followed by many tiny values that a naive sum drops entirely.
        let n = 100_000;
        let tiny = 1e-16;
        let mut xs = vec![tiny; n + 1];
        xs[0] = 1.0;
        let naive: f64 = xs.iter().sum();
        let pairwise = pairwise_sum(&xs);
        let exact = 1.0 + tiny * n as f64;
        assert!((pairwise - exact).abs() < (naive - exact).abs() + 1e-18);
        assert!((pairwise - exact).abs() < 1e-14);
    }

    #[test]
    fn kahan_recovers_cancellation() {
        let mut acc = KahanSum::new();
        for _ in 0..10 {
            acc.add(0.1);
        }
        acc.add(-1.0);
        assert!(acc.value().abs() < 1e-15);
    }

    #[test]
    fn empty_and_single() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[4.25]), 4.25);
    }
}
