//! Inversion of a geodesic to the monotone map from coupling to affine
//! parameter, with shape-preserving cubic interpolation.

use crate::error::GeodesicError;
use crate::integrate::GeodesicSolution;

/// Minimum number of samples a monotone run must hold to support cubic
/// inversion.
const MIN_RUN: usize = 4;

/// Monotone map x -> tau built from geodesic samples. Interpolation is
/// piecewise cubic Hermite with shape-preserving slopes, so the map stays
/// monotone between nodes and the local slope dtau/dx is available.
#[derive(Debug, Clone, PartialEq)]
pub struct HTauMap {
    x: Vec<f64>,
    tau: Vec<f64>,
    d: Vec<f64>,
}

fn monotone_run_from(xs: &[f64], start: usize) -> usize {
    // Length of the longest strictly monotone run beginning at `start`.
    let n = xs.len();
    if n - start < 2 {
        return n - start;
    }
    let up = xs[start + 1] > xs[start];
    if xs[start + 1] == xs[start] {
        return 1;
    }
    let mut len = 2;
    for i in (start + 2)..n {
        let step_up = xs[i] > xs[i - 1];
        if xs[i] == xs[i - 1] || step_up != up {
            break;
        }
        len += 1;
    }
    len
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
    let s: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if s[i - 1] * s[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    let edge = |h0: f64, h1: f64, s0: f64, s1: f64| -> f64 {
        let mut de = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if de * s0 <= 0.0 {
            de = 0.0;
        } else if s0 * s1 <= 0.0 && de.abs() > 3.0 * s0.abs() {
            de = 3.0 * s0;
        }
        de
    };
    if n == 2 {
        d[0] = s[0];
        d[1] = s[0];
    } else {
        d[0] = edge(h[0], h[1], s[0], s[1]);
        d[n - 1] = edge(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
    }
    d
}

impl HTauMap {
    fn from_run(sol: &GeodesicSolution, start: usize, len: usize) -> Result<Self, GeodesicError> {
        if len < MIN_RUN {
            return Err(GeodesicError::TooFewSamples {
                got: len,
                need: MIN_RUN,
            });
        }
        let mut x: Vec<f64> = sol.samples[start..start + len].iter().map(|s| s.x).collect();
        let mut tau: Vec<f64> = sol.samples[start..start + len]
            .iter()
            .map(|s| s.tau)
            .collect();
        if x[1] < x[0] {
            x.reverse();
            tau.reverse();
        }
        let d = pchip_slopes(&x, &tau);
        Ok(Self { x, tau, d })
    }

    /// Map from the longest strictly monotone run starting at the first
    /// sample.
    pub fn from_monotone_prefix(sol: &GeodesicSolution) -> Result<Self, GeodesicError> {
        let xs: Vec<f64> = sol.samples.iter().map(|s| s.x).collect();
        let len = monotone_run_from(&xs, 0);
        Self::from_run(sol, 0, len)
    }

    /// Map from the longest strictly monotone run ending at the last
    /// sample: the branch that approaches the far boundary.
    pub fn from_monotone_tail(sol: &GeodesicSolution) -> Result<Self, GeodesicError> {
        let xs: Vec<f64> = sol.samples.iter().map(|s| s.x).collect();
        let n = xs.len();
        if n < 2 {
            return Err(GeodesicError::TooFewSamples { got: n, need: MIN_RUN });
        }
        let mut start = n - 2;
        let up = xs[n - 1] > xs[n - 2];
        if xs[n - 1] == xs[n - 2] {
            return Err(GeodesicError::TooFewSamples { got: 1, need: MIN_RUN });
        }
        while start > 0 {
            let step_up = xs[start] > xs[start - 1];
            if xs[start] == xs[start - 1] || step_up != up {
                break;
            }
            start -= 1;
        }
        Self::from_run(sol, start, n - start)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Covered coupling interval (ascending).
    pub fn x_range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    fn segment(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.x_range();
        if x < lo || x > hi {
            return None;
        }
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.x.len() - 2),
        };
        Some(i)
    }

    /// Affine parameter at coupling `x`, None outside the covered range.
    pub fn tau_at(&self, x: f64) -> Option<f64> {
        let i = self.segment(x)?;
        let h = self.x[i + 1] - self.x[i];
        let u = (x - self.x[i]) / h;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        Some(
            self.tau[i] * h00
                + self.d[i] * h * h10
                + self.tau[i + 1] * h01
                + self.d[i + 1] * h * h11,
        )
    }

    /// Local slope dtau/dx at coupling `x`, None outside the covered range.
    pub fn slope_at(&self, x: f64) -> Option<f64> {
        let i = self.segment(x)?;
        let h = self.x[i + 1] - self.x[i];
        let u = (x - self.x[i]) / h;
        let u2 = u * u;
        let dh00 = (6.0 * u2 - 6.0 * u) / h;
        let dh10 = 3.0 * u2 - 4.0 * u + 1.0;
        let dh01 = (-6.0 * u2 + 6.0 * u) / h;
        let dh11 = 3.0 * u2 - 2.0 * u;
        Some(
            self.tau[i] * dh00
                + self.d[i] * dh10
                + self.tau[i + 1] * dh01
                + self.d[i + 1] * dh11,
        )
    }

    /// Regression slope of ln|dtau/dx| against ln(edge - x) over the nodes
    /// with edge - x inside [d_lo, d_hi]. None with fewer than three such
    /// nodes. A power-law divergence (edge - x)^p shows up as slope p.
    pub fn loglog_slope(&self, edge: f64, d_lo: f64, d_hi: f64) -> Option<f64> {
        let mut us = Vec::new();
        let mut vs = Vec::new();
        for (i, &xi) in self.x.iter().enumerate() {
            let dist = edge - xi;
            if dist >= d_lo && dist <= d_hi && self.d[i].abs() > 0.0 {
                us.push(dist.ln());
                vs.push(self.d[i].abs().ln());
            }
        }
        if us.len() < 3 {
            return None;
        }
        let n = us.len() as f64;
        let mu = us.iter().sum::<f64>() / n;
        let mv = vs.iter().sum::<f64>() / n;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for (u, v) in us.iter().zip(&vs) {
            sxx += (u - mu) * (u - mu);
            sxy += (u - mu) * (v - mv);
        }
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

/// Strict inversion of a full geodesic: every sample must move the coupling
/// in one direction, otherwise the monotone prefix length is reported.
pub fn tau_of_h(sol: &GeodesicSolution) -> Result<HTauMap, GeodesicError> {
    let xs: Vec<f64> = sol.samples.iter().map(|s| s.x).collect();
    let run = monotone_run_from(&xs, 0);
    if run < xs.len() {
        return Err(GeodesicError::NonMonotone {
            prefix_len: run,
            total: xs.len(),
        });
    }
    HTauMap::from_run(sol, 0, run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{Sample, Terminal};
    use approx::assert_abs_diff_eq;

    fn solution_from(points: &[(f64, f64)]) -> GeodesicSolution {
        GeodesicSolution {
            samples: points
                .iter()
                .map(|&(tau, x)| Sample {
                    tau,
                    t: tau,
                    x,
                    residual: 0.0,
                })
                .collect(),
            terminal: Terminal::Boundary,
            velocity_roots: (1.0, -1.0),
        }
    }

    #[test]
    fn linear_data_inverts_linearly() {
        let pts: Vec<(f64, f64)> = (0..9).map(|i| (0.5 * i as f64, 0.1 * i as f64)).collect();
        let sol = solution_from(&pts);
        let map = tau_of_h(&sol).unwrap();
        assert_abs_diff_eq!(map.tau_at(0.33).unwrap(), 1.65, epsilon = 1e-12);
        assert_abs_diff_eq!(map.slope_at(0.5).unwrap(), 5.0, epsilon = 1e-10);
        assert!(map.tau_at(2.0).is_none());
    }

    #[test]
    fn descending_runs_are_reoriented() {
        let pts: Vec<(f64, f64)> = (0..9).map(|i| (i as f64, 1.0 - 0.1 * i as f64)).collect();
        let map = tau_of_h(&solution_from(&pts)).unwrap();
        let (lo, hi) = map.x_range();
        assert!(lo < hi);
        assert_abs_diff_eq!(map.slope_at(0.5).unwrap(), -10.0, epsilon = 1e-10);
    }

    #[test]
    fn reversal_reports_the_prefix() {
        let pts = [
            (0.0, 0.5),
            (0.1, 0.45),
            (0.2, 0.42),
            (0.3, 0.44),
            (0.4, 0.5),
            (0.5, 0.6),
        ];
        let err = tau_of_h(&solution_from(&pts)).unwrap_err();
        assert_eq!(
            err,
            GeodesicError::NonMonotone {
                prefix_len: 3,
                total: 6
            }
        );
        let tail = HTauMap::from_monotone_tail(&solution_from(&pts)).unwrap();
        assert_eq!(tail.len(), 4);
        let (lo, hi) = tail.x_range();
        assert_abs_diff_eq!(lo, 0.42, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn power_law_slope_is_recovered() {
        // tau = (edge - x)^(-1/2) has dtau/dx = (1/2) (edge - x)^(-3/2).
        let edge = 1.0;
        let pts: Vec<(f64, f64)> = (0..200)
            .map(|i| {
                let x = 0.5 + 0.499 * i as f64 / 199.0;
                ((edge - x).powf(-0.5), x)
            })
            .collect();
        let map = tau_of_h(&solution_from(&pts)).unwrap();
        let slope = map.loglog_slope(edge, 2e-3, 2e-1).unwrap();
        assert_abs_diff_eq!(slope, -1.5, epsilon = 0.02);
    }

    #[test]
    fn short_runs_are_rejected() {
        let pts = [(0.0, 0.1), (0.1, 0.2), (0.2, 0.3)];
        let err = tau_of_h(&solution_from(&pts)).unwrap_err();
        assert!(matches!(err, GeodesicError::TooFewSamples { got: 3, need: 4 }));
    }

    #[test]
    fn interpolation_stays_monotone_between_nodes() {
        // Strongly uneven spacing is where naive cubics overshoot.
        let pts = [
            (0.0, 0.0),
            (0.1, 0.50),
            (0.2, 0.51),
            (1.0, 0.52),
            (5.0, 0.90),
            (5.5, 0.95),
        ];
        let map = tau_of_h(&solution_from(&pts)).unwrap();
        let mut prev = map.tau_at(0.0).unwrap();
        for i in 1..=500 {
            let x = 0.95 * i as f64 / 500.0;
            let v = map.tau_at(x).unwrap();
            assert!(v >= prev - 1e-12, "dip at x = {x}");
            prev = v;
        }
    }
}
