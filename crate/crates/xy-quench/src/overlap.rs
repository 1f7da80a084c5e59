//! Momentum-resolved quench geometry: the Bogoliubov-angle mismatch and
//! the modulation function it induces on the dynamics.

use std::sync::atomic::AtomicBool;

use crate::dynamics::mode_survival;
use crate::error::QuenchError;
use xy_core::{bogoliubov_angle, ModelParams, MomentumGrid, QuenchSpec};

/// Half mismatch of the Bogoliubov angles across the quench at momentum `k`.
pub fn omega_angle(k: f64, p: ModelParams, q: QuenchSpec) -> Result<f64, QuenchError> {
    let before = bogoliubov_angle(k, p)?;
    let after = bogoliubov_angle(k, q.shifted(p))?;
    Ok(0.5 * (before - after))
}

/// Momentum-resolved view of a quench at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    pub ks: Vec<f64>,
    /// Modulation function sin^2(2 Omega_k): the ceiling of each mode's
    /// excursion, independent of time.
    pub modulation: Vec<f64>,
    /// Per-mode complexity contribution Phi_k^2 at the sampled time.
    pub cn: Vec<f64>,
    /// Per-mode echo |<psi_k(0)|psi_k(t)>|^2 at the sampled time.
    pub le: Vec<f64>,
    /// Momentum of the largest modulation value.
    pub argmax_k: f64,
    pub max_modulation: f64,
}

/// Evaluates the modulation function and the per-mode observables at every
/// reporting node of the grid.
pub fn modulation_profile(
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    grid: &MomentumGrid,
) -> Result<ModeProfile, QuenchError> {
    crate::dynamics::check_time(t)?;
    let shifted = q.shifted(p);
    let ks = grid.nodes();
    let mut modulation = Vec::with_capacity(ks.len());
    let mut cn = Vec::with_capacity(ks.len());
    let mut le = Vec::with_capacity(ks.len());
    let clamped = AtomicBool::new(false);
    let mut argmax_k = f64::NAN;
    let mut max_modulation = f64::NEG_INFINITY;
    for &k in &ks {
        let omega = omega_angle(k, p, q)?;
        let mix = (2.0 * omega).sin();
        let m = mix * mix;
        let survival = mode_survival(k, p, shifted, t, &clamped)?;
        let phi = survival.sqrt().acos();
        if m > max_modulation {
            max_modulation = m;
            argmax_k = k;
        }
        modulation.push(m);
        cn.push(phi * phi);
        le.push(survival);
    }
    Ok(ModeProfile {
        ks,
        modulation,
        cn,
        le,
        argmax_k,
        max_modulation,
    })
}
