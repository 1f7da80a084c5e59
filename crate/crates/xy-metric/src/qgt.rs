//! Quantum geometric tensor of the evolved mode states and its
//! Brillouin-zone averages.
//!
//! Time derivatives of the mode state are analytic (only phase factors carry
//! the time dependence). Coupling derivatives use a central difference with
//! one Richardson refinement; the two estimates double as a health check,
//! since they only disagree when the state varies on scales below the step.

use num_complex::Complex64;

use crate::error::MetricError;
use crate::state::{branch_amplitudes, inner, nudged, Amps, Branch};
use crate::tensor::{Coords, Metric2D};
use xy_core::sum::pairwise_sum;
use xy_core::{dispersion, CoreError, ModelParams, MomentumGrid, QuenchSpec, GAP_FLOOR};

/// Base step of the coupling finite differences.
pub const FD_STEP: f64 = 1e-5;

/// Maximum tolerated relative disagreement between the refined derivative
/// and its half-step ingredient.
pub const STENCIL_TOL: f64 = 1e-6;

/// Central difference of a mode-state family with one Richardson refinement.
///
/// `family(s)` evaluates the amplitudes with the differentiated parameter
/// shifted by `s`. Fails when the refinement disagrees with the half-step
/// estimate by more than [`STENCIL_TOL`] relative to the derivative scale.
pub(crate) fn central_richardson<F>(
    family: F,
    step: f64,
    param: &'static str,
    k: f64,
) -> Result<Amps, MetricError>
where
    F: Fn(f64) -> Result<Amps, MetricError>,
{
    let diff = |s: f64| -> Result<Amps, MetricError> {
        let plus = family(s)?;
        let minus = family(-s)?;
        Ok([
            (plus[0] - minus[0]) / (2.0 * s),
            (plus[1] - minus[1]) / (2.0 * s),
        ])
    };
    let coarse = diff(step)?;
    let fine = diff(0.5 * step)?;
    let mut refined = [Complex64::ZERO; 2];
    let mut disagreement: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..2 {
        refined[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
        disagreement = disagreement.max((refined[i] - fine[i]).norm());
        scale = scale.max(refined[i].norm());
    }
    let relative = disagreement / scale;
    if relative > STENCIL_TOL {
        return Err(MetricError::DerivativeStencilFailure {
            param,
            k,
            disagreement: relative,
            tolerance: STENCIL_TOL,
        });
    }
    Ok(refined)
}

/// Coupling derivative of a branch state, moving the pre- and post-quench
/// points together (the quench size stays fixed).
fn x_derivative(
    k: f64,
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    branch: Branch,
    coords: Coords,
) -> Result<Amps, MetricError> {
    central_richardson(
        |s| branch_amplitudes(k, nudged(p, coords, s), q, t, branch).map(|(psi, _)| psi),
        FD_STEP,
        coords.param_label(),
        k,
    )
}

/// Geometric tensor `chi_ij = <d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>`
/// from a state and its two derivatives.
pub(crate) fn assemble(psi: &Amps, d: &[Amps; 2]) -> [[Complex64; 2]; 2] {
    let mut chi = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            chi[i][j] = inner(&d[i], &d[j]) - inner(&d[i], psi) * inner(psi, &d[j]);
        }
    }
    chi
}

/// Per-mode geometric tensor of the evolved state, indexed (t, x) with `x`
/// the coupling named by `coords`.
pub fn qgt_mode(
    k: f64,
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    coords: Coords,
) -> Result<[[Complex64; 2]; 2], MetricError> {
    let (psi, dpsi_dt) = branch_amplitudes(k, p, q, t, Branch::Excited)?;
    let dpsi_dx = x_derivative(k, p, q, t, Branch::Excited, coords)?;
    Ok(assemble(&psi, &[dpsi_dt, dpsi_dx]))
}

/// Berry connection components `<d_i psi|psi>` of one branch, ordered (t, x).
pub(crate) fn berry_connection(
    k: f64,
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    branch: Branch,
    coords: Coords,
) -> Result<[Complex64; 2], MetricError> {
    let (psi, dpsi_dt) = branch_amplitudes(k, p, q, t, branch)?;
    let dpsi_dx = x_derivative(k, p, q, t, branch, coords)?;
    Ok([inner(&dpsi_dt, &psi), inner(&dpsi_dx, &psi)])
}

/// Brillouin-averaged real part of the per-mode geometric tensor of one
/// branch.
pub(crate) fn branch_metric(
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    coords: Coords,
    grid: &MomentumGrid,
    branch: Branch,
) -> Result<Metric2D, MetricError> {
    let [g_tt, g_tx, g_xx] = grid.average_vec(|k| -> Result<[f64; 3], MetricError> {
        let (psi, dpsi_dt) = branch_amplitudes(k, p, q, t, branch)?;
        let dpsi_dx = x_derivative(k, p, q, t, branch, coords)?;
        let chi = assemble(&psi, &[dpsi_dt, dpsi_dx]);
        Ok([
            chi[0][0].re,
            0.5 * (chi[0][1] + chi[1][0]).re,
            chi[1][1].re,
        ])
    })?;
    Ok(Metric2D {
        coords,
        g_tt,
        g_tx,
        g_xx,
    })
}

/// Per-site information metric of the evolved post-quench state: the
/// Brillouin average of the real part of the mode geometric tensors. The
/// static ground-state contribution is included; see [`qim_shift_piece`]
/// for the quench-induced part alone.
pub fn qim_sum(
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    coords: Coords,
    grid: &MomentumGrid,
) -> Result<Metric2D, MetricError> {
    branch_metric(p, q, t, coords, grid, Branch::Excited)
}

/// Information metric of the static ground-state manifold at `p`. Only the
/// coupling-coupling component survives: the state moves along the manifold
/// by Bogoliubov rotations, a quarter of the squared angle rate per mode.
pub fn ground_state_metric(
    p: ModelParams,
    coords: Coords,
    grid: &MomentumGrid,
) -> Result<Metric2D, MetricError> {
    let g_xx = grid.average(|k| {
        let e = dispersion(k, p);
        if e <= GAP_FLOOR {
            return Err(MetricError::from(CoreError::GaplessMode {
                k,
                h: p.h,
                gamma: p.gamma,
            }));
        }
        let rate = match coords {
            Coords::TimeField => -p.gamma * k.sin() / (e * e),
            Coords::TimeAnisotropy => k.sin() * (p.h + k.cos()) / (e * e),
        };
        Ok(0.25 * rate * rate)
    })?;
    Ok(Metric2D {
        coords,
        g_tt: 0.0,
        g_tx: 0.0,
        g_xx,
    })
}

/// Quench-induced part of the metric: [`qim_sum`] minus the static
/// ground-state metric of the pre-quench couplings.
pub fn qim_shift_piece(
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    coords: Coords,
    grid: &MomentumGrid,
) -> Result<Metric2D, MetricError> {
    let full = qim_sum(p, q, t, coords, grid)?;
    let gs = ground_state_metric(p, coords, grid)?;
    Ok(Metric2D {
        coords,
        g_tt: full.g_tt - gs.g_tt,
        g_tx: full.g_tx - gs.g_tx,
        g_xx: full.g_xx - gs.g_xx,
    })
}

/// Sample times of a dephasing window: `periods` repetitions of the fastest
/// post-quench cycle centred on `t_center`, twenty samples per cycle.
pub(crate) fn window_times(
    p: ModelParams,
    q: QuenchSpec,
    t_center: f64,
    periods: f64,
    grid: &MomentumGrid,
) -> Result<Vec<f64>, MetricError> {
    if !periods.is_finite() || periods <= 0.0 {
        return Err(MetricError::InvalidWindow { periods });
    }
    let shifted = q.shifted(p);
    let mut e_max = (shifted.h + 1.0).abs().max((shifted.h - 1.0).abs());
    for k in grid.nodes() {
        e_max = e_max.max(dispersion(k, shifted));
    }
    let width = periods * 2.0 * std::f64::consts::PI / e_max;
    let intervals = (20.0 * periods).ceil() as usize;
    let start = t_center - 0.5 * width;
    Ok((0..=intervals)
        .map(|i| start + width * i as f64 / intervals as f64)
        .collect())
}

/// Time-averaged information metric over a window wide enough for the
/// oscillatory cross terms to cancel. Mirrors the dephasing step behind the
/// large-time closed forms; each sample is a full [`qim_sum`], so the cost
/// is the window sample count times one metric evaluation.
pub fn qim_dephased(
    p: ModelParams,
    q: QuenchSpec,
    t_center: f64,
    periods: f64,
    coords: Coords,
    grid: &MomentumGrid,
) -> Result<Metric2D, MetricError> {
    let times = window_times(p, q, t_center, periods, grid)?;
    let mut tt = Vec::with_capacity(times.len());
    let mut tx = Vec::with_capacity(times.len());
    let mut xx = Vec::with_capacity(times.len());
    for &t in &times {
        let m = qim_sum(p, q, t, coords, grid)?;
        tt.push(m.g_tt);
        tx.push(m.g_tx);
        xx.push(m.g_xx);
    }
    let n = times.len() as f64;
    Ok(Metric2D {
        coords,
        g_tt: pairwise_sum(&tt) / n,
        g_tx: pairwise_sum(&tx) / n,
        g_xx: pairwise_sum(&xx) / n,
    })
}
