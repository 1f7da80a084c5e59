//! Closed-form small-shift expansions of the static complexity.
//!
//! The expansions come in three flavours depending on which coupling is
//! shifted. Each carries the truncation order it was derived to and a
//! validity flag that drops when the expansion point sits too close to a
//! phase boundary for the shift size, or when no closed form exists for
//! the regime at all.

use xy_core::ModelParams;

/// Which coupling the shift delta is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Shift the transverse field: h -> h + delta.
    H,
    /// Shift the anisotropy: gamma -> gamma + delta.
    Gamma,
    /// Shift both couplings by the same delta.
    Diagonal,
}

/// A truncated expansion value together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    /// The summed expansion terms. NaN when no closed form covers the regime.
    pub value: f64,
    /// Highest power of delta retained; 0 when nothing was evaluated.
    pub order: u32,
    /// False inside the guard band around a phase boundary or when the
    /// regime has no printed expansion.
    pub valid: bool,
}

impl SeriesValue {
    fn unavailable() -> Self {
        SeriesValue {
            value: f64::NAN,
            order: 0,
            valid: false,
        }
    }
}

fn sign_or_pos(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Small-shift expansion of the static complexity per site.
///
/// The guard band flags, but does not forbid, evaluation within
/// `5 |delta|` of the relevant phase boundary: the field band around
/// `|h| = 1` for transverse shifts, the anisotropy band around
/// `gamma = 0` for anisotropy shifts, and either for diagonal shifts.
pub fn nielsen_series(p: ModelParams, delta: f64, direction: Direction) -> SeriesValue {
    if !delta.is_finite() {
        return SeriesValue::unavailable();
    }
    let h = p.h;
    let g = p.gamma;
    let ga = g.abs();
    let d2 = delta * delta;
    let d3 = d2 * delta;
    let d4 = d2 * d2;
    let band = 5.0 * delta.abs();
    let field_band = (1.0 - h).abs().min((1.0 + h).abs()) < band;
    let aniso_band = ga < band;

    match direction {
        Direction::H => {
            if h.abs() < 1.0 {
                let u = 1.0 - h * h;
                let value = d2 / (16.0 * ga * u)
                    + h * d3 / (16.0 * ga * u * u)
                    + d4 * (7.0 * g * g * (3.0 * h * h + 1.0) + h * h - 1.0)
                        / (384.0 * ga.powi(3) * u.powi(3));
                SeriesValue {
                    value,
                    order: 4,
                    valid: !field_band,
                }
            } else {
                let a = (h * h + g * g - 1.0).sqrt();
                let u = h * h - 1.0;
                let value = g * g * d2 * h.abs() / (16.0 * u * a.powi(3))
                    - sign_or_pos(h)
                        * g
                        * g
                        * d3
                        * (g * g + 4.0 * h.powi(4) + (g * g - 3.0) * h * h - 1.0)
                        / (32.0 * u * u * a.powi(5));
                SeriesValue {
                    value,
                    order: 3,
                    valid: !field_band,
                }
            }
        }
        Direction::Gamma => {
            if h.abs() < 1.0 {
                let w = 1.0 + ga;
                let value = d2 / (16.0 * ga * w * w)
                    - sign_or_pos(g) * (3.0 * ga + 1.0) * d3 / (32.0 * g * g * w.powi(3))
                    + (ga * (43.0 * ga + 28.0) + 7.0) * d4 / (384.0 * ga.powi(3) * w.powi(4));
                SeriesValue {
                    value,
                    order: 4,
                    valid: !aniso_band,
                }
            } else {
                SeriesValue::unavailable()
            }
        }
        Direction::Diagonal => {
            if h.abs() < 1.0 {
                let w = 1.0 + ga;
                let u = 1.0 - h * h;
                let value = d2 * (2.0 - h * h + ga * (ga + 2.0)) / (16.0 * ga * w * w * u);
                SeriesValue {
                    value,
                    order: 2,
                    valid: !(field_band || aniso_band),
                }
            } else {
                SeriesValue::unavailable()
            }
        }
    }
}
