//! Information metric of a superposition of the evolved ground and excited
//! branches.
//!
//! The two branches never mix inside a momentum mode, so the metric of the
//! superposed state splits into the branch metrics weighted by the
//! populations plus a cross term built from the difference of the two Berry
//! connections. The connection difference is averaged over the zone first
//! and the cross term is assembled from the averaged components, with the
//! real part of the product supplying the symmetrization.

use num_complex::Complex64;

use crate::error::MetricError;
use crate::qgt::{berry_connection, branch_metric};
use crate::state::Branch;
use crate::tensor::{Coords, Metric2D, MetricDecomposition};
use xy_core::{ModelParams, MomentumGrid, QuenchSpec};

const WEIGHT_TOL: f64 = 1e-9;

/// Metric of the state `k_g |ground branch> + k_e |excited branch>` on the
/// (t, x) plane named by `coords`, decomposed into branch and interference
/// parts. The amplitudes must satisfy `|k_g|^2 + |k_e|^2 = 1`.
pub fn full_state_metric(
    k_g: Complex64,
    k_e: Complex64,
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    coords: Coords,
    grid: &MomentumGrid,
) -> Result<MetricDecomposition, MetricError> {
    let w_g = k_g.norm_sqr();
    let w_e = k_e.norm_sqr();
    let sum = w_g + w_e;
    if !sum.is_finite() || (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(MetricError::InvalidWeights { sum });
    }
    let g_ground = branch_metric(p, q, t, coords, grid, Branch::Ground)?;
    let g_excited = branch_metric(p, q, t, coords, grid, Branch::Excited)?;
    let [at_re, at_im, ax_re, ax_im] = grid.average_vec(|k| -> Result<[f64; 4], MetricError> {
        let a_g = berry_connection(k, p, q, t, Branch::Ground, coords)?;
        let a_e = berry_connection(k, p, q, t, Branch::Excited, coords)?;
        let dt = a_g[0] - a_e[0];
        let dx = a_g[1] - a_e[1];
        Ok([dt.re, dt.im, dx.re, dx.im])
    })?;
    let a_t = Complex64::new(at_re, at_im);
    let a_x = Complex64::new(ax_re, ax_im);
    let cross = w_g * w_e;
    let total = Metric2D {
        coords,
        g_tt: w_g * g_ground.g_tt + w_e * g_excited.g_tt + cross * a_t.norm_sqr(),
        g_tx: w_g * g_ground.g_tx
            + w_e * g_excited.g_tx
            + cross * (a_t * a_x.conj()).re,
        g_xx: w_g * g_ground.g_xx + w_e * g_excited.g_xx + cross * a_x.norm_sqr(),
    };
    Ok(MetricDecomposition {
        total,
        g_ground,
        g_excited,
        berry_diff: [a_t, a_x],
        weight_ground: w_g,
        weight_excited: w_e,
    })
}
