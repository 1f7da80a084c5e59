//! Triangle-inequality defect of the static complexity.
//!
//! A two-leg path from a point to a diagonally shifted target is never
//! cheaper than the direct circuit, so the defect is non-negative wherever
//! the mode averages converge. They converge even when a corner of the
//! triangle sits exactly on a transition line, because the sampled momenta
//! stay clear of the gap-closing point; evaluation fails only if a sampled
//! mode is itself gapless. The defect map scans this quantity over a
//! rectangle of the phase diagram.

use rayon::prelude::*;

use crate::{nielsen_static, StaticError};
use xy_core::{CoreError, ModelParams, MomentumGrid};

/// Which coupling the first leg of the two-leg path shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LegOrder {
    /// First h -> h_t, then gamma -> gamma_t.
    #[default]
    HFirst,
    /// First gamma -> gamma_t, then h -> h_t.
    GammaFirst,
}

fn sign_or_pos(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Defect of the triangle inequality at `p` for an outward diagonal shift.
///
/// The target sits at `(h + sign(h) delta, gamma + sign(gamma) delta)`, so
/// the shift always moves away from the phase boundaries. The defect is
/// the cost of the two-leg path through the intermediate point, minus the
/// cost of the direct circuit, all from exact mode averages.
pub fn triangle_defect(
    p: ModelParams,
    delta: f64,
    order: LegOrder,
    grid: &MomentumGrid,
) -> Result<f64, StaticError> {
    if !delta.is_finite() {
        return Err(StaticError::Core(CoreError::NonFinite {
            name: "delta",
            value: delta,
        }));
    }
    if delta < 0.0 {
        return Err(StaticError::NegativeDelta { delta });
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let target = ModelParams {
        h: p.h + sign_or_pos(p.h) * delta,
        gamma: p.gamma + sign_or_pos(p.gamma) * delta,
    };
    let mid = match order {
        LegOrder::HFirst => ModelParams {
            h: target.h,
            gamma: p.gamma,
        },
        LegOrder::GammaFirst => ModelParams {
            h: p.h,
            gamma: target.gamma,
        },
    };

    let first = nielsen_static(p, mid, grid)?;
    let second = nielsen_static(mid, target, grid)?;
    let direct = nielsen_static(p, target, grid)?;
    Ok(first + second - direct)
}

/// Defect values over a rectangle of expansion points.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMap {
    pub hs: Vec<f64>,
    pub gammas: Vec<f64>,
    /// Row-major with h as the outer index: `values[ih * gammas.len() + ig]`.
    pub values: Vec<f64>,
}

impl TriangleMap {
    pub fn value(&self, ih: usize, ig: usize) -> f64 {
        self.values[ih * self.gammas.len() + ig]
    }

    /// Location and value of the largest finite defect, if any point
    /// evaluated successfully.
    pub fn max_point(&self) -> Option<(f64, f64, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in self.values.iter().enumerate() {
            if v.is_finite() && best.map_or(true, |(_, bv)| v > bv) {
                best = Some((i, v));
            }
        }
        best.map(|(i, v)| {
            let ih = i / self.gammas.len();
            let ig = i % self.gammas.len();
            (self.hs[ih], self.gammas[ig], v)
        })
    }
}

/// Evaluates the triangle defect at every `(h, gamma)` pair of the two axes.
///
/// Points that fail (a sampled mode of some corner is exactly gapless) are
/// recorded as NaN rather than aborting the scan. Rows are computed in
/// parallel but the layout is deterministic.
pub fn triangle_map(
    hs: &[f64],
    gammas: &[f64],
    delta: f64,
    order: LegOrder,
    grid: &MomentumGrid,
) -> Result<TriangleMap, StaticError> {
    if hs.len() < 2 || gammas.len() < 2 {
        return Err(StaticError::InvalidResolution {
            nh: hs.len(),
            ngamma: gammas.len(),
        });
    }
    if !delta.is_finite() {
        return Err(StaticError::Core(CoreError::NonFinite {
            name: "delta",
            value: delta,
        }));
    }
    if delta < 0.0 {
        return Err(StaticError::NegativeDelta { delta });
    }

    let n_gamma = gammas.len();
    let values: Vec<f64> = (0..hs.len() * n_gamma)
        .into_par_iter()
        .map(|idx| {
            let point = ModelParams::new(hs[idx / n_gamma], gammas[idx % n_gamma])
                .map_err(StaticError::from)
                .and_then(|p| triangle_defect(p, delta, order, grid));
            point.unwrap_or(f64::NAN)
        })
        .collect();

    Ok(TriangleMap {
        hs: hs.to_vec(),
        gammas: gammas.to_vec(),
        values,
    })
}
