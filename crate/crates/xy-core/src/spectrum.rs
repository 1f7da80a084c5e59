use crate::error::CoreError;
use crate::params::ModelParams;

/// Below this value the single-mode gap is treated as closed.
pub const GAP_FLOOR: f64 = 1e-14;

/// Single-mode excitation energy
/// `eps_k = sqrt((h + cos k)^2 + (gamma sin k)^2)`.
pub fn dispersion(k: f64, p: ModelParams) -> f64 {
    let a = p.h + k.cos();
    let b = p.gamma * k.sin();
    a.hypot(b)
}

/// Bogoliubov rotation angle `theta_k = atan2(gamma sin k, h + cos k)`.
///
/// The two-argument arctangent keeps the angle on a single branch:
/// for gamma > 0 and k in (0, pi) it lies in (0, pi), and flipping the sign
/// of gamma flips the sign of the angle. Fails when the mode is gapless,
/// where the rotation is undefined.
pub fn bogoliubov_angle(k: f64, p: ModelParams) -> Result<f64, CoreError> {
    if dispersion(k, p) <= GAP_FLOOR {
        return Err(CoreError::GaplessMode {
            k,
            h: p.h,
            gamma: p.gamma,
        });
    }
    Ok((p.gamma * k.sin()).atan2(p.h + k.cos()))
}
