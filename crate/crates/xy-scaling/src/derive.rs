//! Finite-difference derivatives of the total circuit complexity with
//! respect to the quenched coupling, on finite chains of increasing length.

use xy_core::{CoreError, ModelParams, MomentumGrid, QuenchKind, QuenchSpec};
use xy_quench::{larget_limit, nielsen_quench};

use crate::error::ScalingError;

/// Central-difference step applied to the quenched coupling.
pub const FD_STEP: f64 = 1e-4;

/// Smallest chain length admitted into a scaling run.
pub const MIN_SIZE: usize = 101;

/// `Auto` switches from the instantaneous value to the dephased long-time
/// average once `t >= LARGE_TIME_FACTOR / |delta|`.
pub const LARGE_TIME_FACTOR: f64 = 100.0;

/// Which shifted coupling the derivative sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSel {
    /// Sweep the quenched transverse field `h + delta`.
    Field,
    /// Sweep the quenched anisotropy `gamma + delta`.
    Anisotropy,
}

impl LambdaSel {
    pub fn kind(self) -> QuenchKind {
        match self {
            LambdaSel::Field => QuenchKind::Transverse,
            LambdaSel::Anisotropy => QuenchKind::Anisotropic,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LambdaSel::Field => "h + delta",
            LambdaSel::Anisotropy => "gamma + delta",
        }
    }

    fn base_coupling(self, p: ModelParams) -> f64 {
        match self {
            LambdaSel::Field => p.h,
            LambdaSel::Anisotropy => p.gamma,
        }
    }
}

/// Whether the complexity entering the derivative is the instantaneous
/// value at `t` or the dephased long-time average.
///
/// Oscillations of the instantaneous value never die out on a finite chain,
/// so late-time derivatives sample noise unless the dephased average is
/// used instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeRegime {
    Instantaneous,
    Dephased,
    #[default]
    Auto,
}

impl TimeRegime {
    fn dephased(self, t: f64, delta: f64) -> bool {
        match self {
            TimeRegime::Instantaneous => false,
            TimeRegime::Dephased => true,
            TimeRegime::Auto => delta != 0.0 && t >= LARGE_TIME_FACTOR / delta.abs(),
        }
    }
}

fn gapless_crossing(sel: LambdaSel, p: ModelParams, lambda0: f64) -> Option<CoreError> {
    match sel {
        LambdaSel::Field => {
            for c in [-1.0, 1.0] {
                if (lambda0 - c).abs() <= FD_STEP {
                    return Some(CoreError::GaplessMode {
                        k: if c > 0.0 { std::f64::consts::PI } else { 0.0 },
                        h: c,
                        gamma: p.gamma,
                    });
                }
            }
            None
        }
        LambdaSel::Anisotropy => {
            if p.h.abs() <= 1.0 && lambda0.abs() <= FD_STEP {
                return Some(CoreError::GaplessMode {
                    k: (-p.h).acos(),
                    h: p.h,
                    gamma: 0.0,
                });
            }
            None
        }
    }
}

fn total_complexity(
    p: ModelParams,
    kind: QuenchKind,
    lambda: f64,
    t: f64,
    n: usize,
    grid: &MomentumGrid,
    dephased: bool,
    sel: LambdaSel,
) -> Result<f64, ScalingError> {
    let q = QuenchSpec::new(kind, lambda - sel.base_coupling(p))?;
    let per_site = if dephased {
        larget_limit(p, q, grid)?
    } else {
        nielsen_quench(p, q, t, grid)?.value
    };
    Ok(n as f64 * per_site)
}

/// Derivative of the total (not per-site) complexity with respect to the
/// quenched coupling, at fixed pre-quench couplings.
pub fn dcn_dparam(
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    n: usize,
    sel: LambdaSel,
    regime: TimeRegime,
) -> Result<f64, ScalingError> {
    if q.kind != sel.kind() {
        return Err(ScalingError::SelectorMismatch {
            selector: sel,
            quench: q.kind,
        });
    }
    let grid = MomentumGrid::finite(n)?;
    let lambda0 = sel.base_coupling(p) + q.delta;
    if let Some(err) = gapless_crossing(sel, p, lambda0) {
        return Err(err.into());
    }
    let dephased = regime.dephased(t, q.delta);
    let plus = total_complexity(p, q.kind, lambda0 + FD_STEP, t, n, &grid, dephased, sel)?;
    let minus = total_complexity(p, q.kind, lambda0 - FD_STEP, t, n, &grid, dephased, sel)?;
    Ok((plus - minus) / (2.0 * FD_STEP))
}
