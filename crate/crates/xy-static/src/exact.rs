//! Ground-state circuit complexity between two parameter points.
//!
//! Each momentum mode contributes the squared half-difference of its
//! Bogoliubov angles at the two points; the total is the per-site mode
//! average over the chosen grid.

use crate::StaticError;
use xy_core::{bogoliubov_angle, ModelParams, MomentumGrid};

/// Per-site complexity of the optimal circuit connecting the ground states
/// at `a` and `b`.
///
/// Fails with a gapless-mode error when either point closes the gap at a
/// momentum the grid actually visits.
pub fn nielsen_static(
    a: ModelParams,
    b: ModelParams,
    grid: &MomentumGrid,
) -> Result<f64, StaticError> {
    grid.average(|k| {
        let ta = bogoliubov_angle(k, a)?;
        let tb = bogoliubov_angle(k, b)?;
        let half = 0.5 * (ta - tb);
        Ok::<f64, StaticError>(half * half)
    })
}
