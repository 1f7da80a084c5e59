//! Infinite-time limit of the post-quench complexity and its closed-form
//! expansion, plus finite-window time averages for comparing against it.
//!
//! At late times the phases `eps~_k t` dephase across momenta and every
//! `sin^2` averages to one half, leaving a time-independent limit. The
//! argument fails when the quenched chain is gapless (resonant modes never
//! dephase) or the quenched field vanishes (the spectrum degenerates).

use rayon::prelude::*;

use crate::dynamics::{check_time, nielsen_quench, Sampled};
use crate::error::QuenchError;
use xy_core::sum::pairwise_sum;
use xy_core::{bogoliubov_angle, ModelParams, MomentumGrid, QuenchKind, QuenchSpec};

/// Quenched fields within this distance of {0, +1, -1} are rejected.
const LIMIT_TOL: f64 = 1e-6;

/// Per-site complexity in the dephased infinite-time limit.
pub fn larget_limit(
    p: ModelParams,
    q: QuenchSpec,
    grid: &MomentumGrid,
) -> Result<f64, QuenchError> {
    let shifted = q.shifted(p);
    let hq = shifted.h;
    if hq.abs() <= LIMIT_TOL || (hq.abs() - 1.0).abs() <= LIMIT_TOL {
        return Err(QuenchError::InvalidLimit { quenched_field: hq });
    }
    grid.average(|k| {
        let omega = 0.5 * (bogoliubov_angle(k, p)? - bogoliubov_angle(k, shifted)?);
        let mix = (2.0 * omega).sin();
        let phi = (1.0 - 0.5 * mix * mix).sqrt().acos();
        Ok::<_, QuenchError>(phi * phi)
    })
}

/// A truncated expansion of the infinite-time limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSeries {
    pub value: f64,
    /// Highest power of delta retained.
    pub order: u32,
    /// False when an expansion point or the quenched field sits inside a
    /// guard band of a phase boundary or of zero field.
    pub valid: bool,
}

fn sign_or_pos(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Small-shift expansion of the infinite-time limit for a field quench.
///
/// Term for term this is exactly twice the static expansion. No closed
/// form is printed for anisotropy quenches.
pub fn larget_series(p: ModelParams, q: QuenchSpec) -> Result<LimitSeries, QuenchError> {
    if q.kind != QuenchKind::Transverse {
        return Err(QuenchError::Unsupported {
            what: "infinite-time expansion for an anisotropy quench",
        });
    }
    let h = p.h;
    let g = p.gamma;
    let ga = g.abs();
    let d = q.delta;
    let d2 = d * d;
    let d3 = d2 * d;
    let d4 = d2 * d2;
    let band = 5.0 * d.abs();
    let hq = h + d;
    let guarded = (1.0 - h).abs().min((1.0 + h).abs()) < band
        || (1.0 - hq).abs().min((1.0 + hq).abs()) < band
        || hq.abs() < band;

    if h.abs() < 1.0 {
        let u = 1.0 - h * h;
        let value = d2 / (8.0 * ga * u) + h * d3 / (8.0 * ga * u * u)
            - d4 * (13.0 * g * g + (39.0 * g * g + 7.0) * h * h - 7.0)
                / (384.0 * ga.powi(3) * (h * h - 1.0).powi(3));
        Ok(LimitSeries {
            value,
            order: 4,
            valid: !guarded,
        })
    } else {
        let a = (h * h + g * g - 1.0).sqrt();
        let u = h * h - 1.0;
        let value = g * g * d2 * h.abs() / (8.0 * u * a.powi(3))
            - sign_or_pos(h) * g * g * d3
                * (g * g + 4.0 * h.powi(4) + (g * g - 3.0) * h * h - 1.0)
                / (16.0 * u * u * a.powi(5));
        Ok(LimitSeries {
            value,
            order: 3,
            valid: !guarded,
        })
    }
}

/// Mean of the complexity over `[start, end]`, sampled no coarser than
/// `max_step`, with samples evaluated in parallel.
pub fn time_average(
    p: ModelParams,
    q: QuenchSpec,
    start: f64,
    end: f64,
    max_step: f64,
    grid: &MomentumGrid,
) -> Result<Sampled, QuenchError> {
    check_time(start)?;
    check_time(end)?;
    if end <= start {
        return Err(QuenchError::InvalidWindow {
            start,
            end,
            min_length: 0.0,
        });
    }
    if !max_step.is_finite() || max_step <= 0.0 {
        return Err(QuenchError::InvalidStep { step: max_step });
    }
    let intervals = (((end - start) / max_step).ceil() as usize).max(1);
    let samples: Vec<Sampled> = (0..=intervals)
        .into_par_iter()
        .map(|i| {
            let t = start + (end - start) * i as f64 / intervals as f64;
            nielsen_quench(p, q, t, grid)
        })
        .collect::<Result<_, _>>()?;
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    Ok(Sampled {
        value: pairwise_sum(&values) / values.len() as f64,
        clamped: samples.iter().any(|s| s.clamped),
    })
}
