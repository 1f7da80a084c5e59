//! Closed-form small-time, small-shift expansion of the post-quench
//! complexity. The two small parameters enter with unequal powers, so the
//! expansion keeps the lowest surviving powers of each: delta^2 t^2,
//! delta^3 t^4, and the regular delta^2 t^4 background term.

use crate::dynamics::check_time;
use crate::error::QuenchError;
use xy_core::{ModelParams, QuenchKind, QuenchSpec};

/// A truncated small-time value split into its resonant and regular parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallTimeValue {
    /// Total of the retained expansion terms (regular part included).
    pub value: f64,
    /// The regular background term alone.
    pub regular: f64,
    /// False inside the guard band around a phase boundary, where the
    /// expansion coefficients blow up.
    pub valid: bool,
}

fn sign_or_pos(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Small-time expansion of the per-site complexity (equally of -log L).
///
/// Field quenches have closed forms in both phases; anisotropy quenches
/// only for `|h| < 1`, and the unsupported regime is an error rather than
/// a silent extrapolation.
pub fn smalltime_series(
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
) -> Result<SmallTimeValue, QuenchError> {
    check_time(t)?;
    let h = p.h;
    let g = p.gamma;
    let ga = g.abs();
    let d = q.delta;
    let t2 = t * t;
    let t4 = t2 * t2;
    let band = 5.0 * d.abs();

    match q.kind {
        QuenchKind::Transverse => {
            let regular = -g * g * d * d * t4 / 12.0;
            let field_band = (1.0 - h).abs().min((1.0 + h).abs()) < band;
            if h.abs() < 1.0 {
                let w = 1.0 + ga;
                let value = regular + ga * d * d * t2 / (2.0 * w)
                    - h * g * g * d.powi(3) * t4 / (3.0 * w * w);
                Ok(SmallTimeValue {
                    value,
                    regular,
                    valid: !field_band,
                })
            } else {
                let a = (h * h + g * g - 1.0).sqrt();
                let u = 1.0 - g * g;
                let bracket = g * g - h.abs() * (g * g + 1.0) * (a - h.abs()) - 1.0;
                let value = regular
                    + g * g * d * d * t2 * (h.abs() - a) / (2.0 * a * u)
                    + sign_or_pos(h) * g * g * d.powi(3) * t4 * bracket / (3.0 * a * u * u);
                // The expansion denominators vanish at |gamma| = 1 in this
                // phase, so flag that band as well.
                let iso_band = u.abs() < band;
                Ok(SmallTimeValue {
                    value,
                    regular,
                    valid: !(field_band || iso_band),
                })
            }
        }
        QuenchKind::Anisotropic => {
            if h.abs() >= 1.0 {
                return Err(QuenchError::Unsupported {
                    what: "anisotropy-quench small-time expansion outside |h| < 1",
                });
            }
            let regular = -d * d * (4.0 * h * h + 1.0) * t4 / 48.0;
            let w = ga + 1.0;
            let b = ga * (ga + 5.0) - 8.0 * h.powi(4) + 4.0 * w * (ga + 4.0) * h * h + 7.0;
            let value = regular + d * d * t2 * (ga + 2.0 * ga * h * h + 1.0) / (4.0 * w.powi(3))
                - sign_or_pos(g) * ga * d.powi(3) * t4 * (3.0 + ga * b) / (24.0 * w.powi(5));
            let aniso_band = ga < band;
            Ok(SmallTimeValue {
                value,
                regular,
                valid: !aniso_band,
            })
        }
    }
}
