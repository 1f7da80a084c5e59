//! Connection coefficients of a metric field from central-difference
//! derivatives of the components.

use crate::error::GeodesicError;
use crate::field::{MetricField, DET_FLOOR};
use xy_metric::Metric2D;

/// Step of the metric-component finite differences.
pub const METRIC_FD_STEP: f64 = 1e-5;

fn components(m: Metric2D) -> [[f64; 2]; 2] {
    [[m.g_tt, m.g_tx], [m.g_tx, m.g_xx]]
}

/// Connection coefficients `Gamma[a][b][c]` (upper index first, symmetric in
/// the lower pair) at a point of the field.
pub fn christoffel(
    field: &dyn MetricField,
    t: f64,
    x: f64,
) -> Result<[[[f64; 2]; 2]; 2], GeodesicError> {
    let g = field.evaluate(t, x)?;
    let det = g.det();
    if !det.is_finite() || det.abs() < DET_FLOOR {
        return Err(GeodesicError::SingularMetric { t, x, det });
    }
    let inv = [
        [g.g_xx / det, -g.g_tx / det],
        [-g.g_tx / det, g.g_tt / det],
    ];
    let s = METRIC_FD_STEP;
    let dt = {
        let plus = components(field.evaluate(t + s, x)?);
        let minus = components(field.evaluate(t - s, x)?);
        central(plus, minus, s)
    };
    let dx = {
        let plus = components(field.evaluate(t, x + s)?);
        let minus = components(field.evaluate(t, x - s)?);
        central(plus, minus, s)
    };
    // dg[c][a][b] = d g_ab / d x^c
    let dg = [dt, dx];
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let mut sum = 0.0;
                for d in 0..2 {
                    sum += inv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                }
                gamma[a][b][c] = 0.5 * sum;
            }
        }
    }
    Ok(gamma)
}

fn central(plus: [[f64; 2]; 2], minus: [[f64; 2]; 2], s: f64) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (plus[i][j] - minus[i][j]) / (2.0 * s);
        }
    }
    out
}
