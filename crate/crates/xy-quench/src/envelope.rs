//! Amplitude statistic of the finite-time oscillations of the complexity.
//!
//! The shortest oscillation period is set by the largest quenched
//! excitation energy; the window is sampled densely against that period
//! and summarized by the half peak-to-peak amplitude and the mean.

use crate::dynamics::{check_time, time_series, SeriesLabel};
use crate::error::QuenchError;
use xy_core::sum::pairwise_sum;
use xy_core::{dispersion, ModelParams, MomentumGrid, QuenchSpec};

/// Half peak-to-peak amplitude and mean of C_N(t) over a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub amplitude: f64,
    pub mean: f64,
    pub samples: usize,
}

/// Measures the oscillation envelope of the complexity over `[start, end]`.
///
/// The window must span more than ten of the shortest mode periods, and is
/// sampled at twenty points per such period.
pub fn oscillation_envelope(
    p: ModelParams,
    q: QuenchSpec,
    start: f64,
    end: f64,
    grid: &MomentumGrid,
) -> Result<Envelope, QuenchError> {
    check_time(start)?;
    check_time(end)?;
    let shifted = q.shifted(p);
    // Largest quenched excitation energy: scan the grid nodes and include
    // the zone boundaries, which the grids exclude.
    let mut e_max = (shifted.h + 1.0).abs().max((shifted.h - 1.0).abs());
    for k in grid.nodes() {
        e_max = e_max.max(dispersion(k, shifted));
    }
    let period = 2.0 * std::f64::consts::PI / e_max;
    let min_length = 10.0 * period;
    if !(end - start > min_length) {
        return Err(QuenchError::InvalidWindow {
            start,
            end,
            min_length,
        });
    }
    let intervals = ((end - start) / (period / 20.0)).ceil() as usize;
    let times: Vec<f64> = (0..=intervals)
        .map(|i| start + (end - start) * i as f64 / intervals as f64)
        .collect();
    let series = time_series(p, q, &times, SeriesLabel::Nielsen, grid)?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in &series.values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(Envelope {
        amplitude: 0.5 * (hi - lo),
        mean: pairwise_sum(&series.values) / series.values.len() as f64,
        samples: series.values.len(),
    })
}
