//! Closed forms of the information metric in the two tractable regimes.
//!
//! Both are leading-order expansions in the quench size. The small-time
//! branch keeps the full oscillatory structure near t = 0; the large-time
//! branch gives the dephased metric after the oscillatory cross terms have
//! cancelled, and its coupling-coupling component is the quench-induced
//! piece only, excluding the static ground-state contribution.

use crate::error::MetricError;
use crate::tensor::{Coords, Metric2D};
use xy_core::{ModelParams, QuenchKind, QuenchSpec};

/// Expansion regime of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Leading behaviour near the quench, polynomial in t.
    SmallTime,
    /// Dephased secular behaviour, valid once the fast cycles average out.
    LargeTime,
}

fn transverse_small(p: ModelParams, delta: f64, t: f64) -> Metric2D {
    let (h, gamma) = (p.h, p.gamma);
    let g2 = gamma * gamma;
    if h.abs() < 1.0 {
        let ga = gamma.abs();
        let den = 1.0 + ga;
        let g_tt = ga * delta * delta / (2.0 * den);
        let core = h * g2 / (3.0 * den * den);
        Metric2D {
            coords: Coords::TimeField,
            g_tt,
            g_tx: ga * delta * t / (2.0 * den)
                - core * delta * delta * t.powi(3)
                - g2 * delta * t.powi(3) / 6.0,
            g_xx: -core * delta * t.powi(4),
        }
    } else {
        let a = (h * h + g2 - 1.0).sqrt();
        let s = h.signum();
        let iso = 1.0 - g2;
        let lead = g2 * (h.abs() - a) / (2.0 * a * iso);
        let core = g2 * (g2 - h.abs() * (g2 + 1.0) * (a - h.abs()) - 1.0)
            / (3.0 * a * iso * iso);
        Metric2D {
            coords: Coords::TimeField,
            g_tt: lead * delta * delta,
            g_tx: lead * delta * t + s * core * delta * delta * t.powi(3)
                - g2 * delta * t.powi(3) / 6.0,
            g_xx: s * core * delta * t.powi(4),
        }
    }
}

fn anisotropy_small(p: ModelParams, delta: f64, t: f64) -> Result<Metric2D, MetricError> {
    if p.h.abs() >= 1.0 {
        return Err(MetricError::Unsupported {
            what: "anisotropy-quench small-time metric outside |h| < 1",
        });
    }
    let (h2, ga) = (p.h * p.h, p.gamma.abs());
    let s = p.gamma.signum();
    let den = ga + 1.0;
    let lead = (ga + 2.0 * ga * h2 + 1.0) / (4.0 * den.powi(3));
    let b = ga * (ga + 5.0) - 8.0 * h2 * h2 + 4.0 * den * (ga + 4.0) * h2 + 7.0;
    let core = ga * (3.0 + ga * b) / (24.0 * den.powi(5));
    Ok(Metric2D {
        coords: Coords::TimeAnisotropy,
        g_tt: lead * delta * delta,
        g_tx: lead * delta * t - s * core * delta * delta * t.powi(3)
            - (4.0 * h2 + 1.0) * delta * t.powi(3) / 24.0,
        g_xx: -s * core * delta * t.powi(4),
    })
}

fn transverse_large(p: ModelParams, delta: f64, t: f64) -> Result<Metric2D, MetricError> {
    if p.h.abs() >= 1.0 {
        return Err(MetricError::Unsupported {
            what: "large-time metric outside |h| < 1",
        });
    }
    let (h, gamma) = (p.h, p.gamma);
    let (ga, g2) = (gamma.abs(), gamma * gamma);
    let omh = 1.0 - h * h;
    let secular = g2 * (16.0 * omh * omh * t * t + 69.0 * h * h + 23.0) + 3.0 * omh;
    Ok(Metric2D {
        coords: Coords::TimeField,
        g_tt: ga * delta * delta / (2.0 * (1.0 + ga)),
        g_tx: 0.0,
        g_xx: h * delta / (8.0 * ga * omh * omh)
            + delta * delta * secular / (256.0 * ga.powi(3) * omh.powi(3)),
    })
}

/// Closed-form metric at quench size `q.delta` and time `t`.
///
/// The coordinate plane must pair time with the quenched coupling. The
/// large-time branch exists only for transverse quenches inside |h| < 1;
/// the small-time anisotropy branch likewise needs |h| < 1. The printed
/// expansions keep their source's poles: the large-time branch diverges as
/// gamma tends to zero, and the field-polarized small-time branch is
/// singular on |gamma| = 1.
pub fn qim_closed(
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    regime: Regime,
    coords: Coords,
) -> Result<Metric2D, MetricError> {
    if !t.is_finite() {
        return Err(MetricError::Core(xy_core::CoreError::NonFinite {
            name: "t",
            value: t,
        }));
    }
    if coords != Coords::for_quench(q.kind) {
        return Err(MetricError::Unsupported {
            what: "coordinate pair does not match the quenched coupling",
        });
    }
    match (q.kind, regime) {
        (QuenchKind::Transverse, Regime::SmallTime) => Ok(transverse_small(p, q.delta, t)),
        (QuenchKind::Transverse, Regime::LargeTime) => transverse_large(p, q.delta, t),
        (QuenchKind::Anisotropic, Regime::SmallTime) => anisotropy_small(p, q.delta, t),
        (QuenchKind::Anisotropic, Regime::LargeTime) => Err(MetricError::Unsupported {
            what: "large-time metric for an anisotropy quench",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use xy_quench::{larget_series, smalltime_series};

    fn p(h: f64, gamma: f64) -> ModelParams {
        ModelParams::new(h, gamma).unwrap()
    }

    #[test]
    fn leading_time_components() {
        let m = qim_closed(
            p(0.5, 0.5),
            QuenchSpec::transverse(0.1).unwrap(),
            0.3,
            Regime::SmallTime,
            Coords::TimeField,
        )
        .unwrap();
        assert_relative_eq!(m.g_tt, 1.0 / 600.0, max_relative = 1e-12);
        let a = qim_closed(
            p(0.5, 0.5),
            QuenchSpec::anisotropic(0.05).unwrap(),
            0.3,
            Regime::SmallTime,
            Coords::TimeAnisotropy,
        )
        .unwrap();
        assert_relative_eq!(a.g_tt, 3.240740740741e-4, max_relative = 1e-10);
    }

    #[test]
    fn dephased_metric_is_diagonal() {
        let m = qim_closed(
            p(0.5, 0.5),
            QuenchSpec::transverse(0.01).unwrap(),
            40.0,
            Regime::LargeTime,
            Coords::TimeField,
        )
        .unwrap();
        assert_eq!(m.g_tx, 0.0);
        assert!(m.g_tt > 0.0 && m.g_xx > 0.0);
    }

    #[test]
    fn field_branches_join_continuously_on_the_critical_line() {
        let q = QuenchSpec::transverse(0.07).unwrap();
        let t = 0.9;
        let below = qim_closed(p(1.0 - 1e-9, 0.6), q, t, Regime::SmallTime, Coords::TimeField)
            .unwrap();
        let at = qim_closed(p(1.0, 0.6), q, t, Regime::SmallTime, Coords::TimeField).unwrap();
        let above = qim_closed(p(1.0 + 1e-9, 0.6), q, t, Regime::SmallTime, Coords::TimeField)
            .unwrap();
        for (lo, hi) in [
            (below.g_tt, at.g_tt),
            (above.g_tt, at.g_tt),
            (below.g_tx, at.g_tx),
            (above.g_tx, at.g_tx),
            (below.g_xx, at.g_xx),
            (above.g_xx, at.g_xx),
        ] {
            assert_relative_eq!(lo, hi, max_relative = 1e-6);
        }
    }

    #[test]
    fn line_element_reproduces_the_complexity_series() {
        // Three times the small-time complexity equals the squared line
        // element along (t, delta) minus the regular piece; the identity is
        // algebraic, not a numerical coincidence.
        let cases: &[(f64, f64, f64, f64, bool)] = &[
            (0.5, 0.5, 0.1, 0.3, false),
            (0.5, 0.5, -0.08, 0.6, false),
            (-0.4, 0.8, 0.05, 1.1, false),
            (1.5, 0.5, 0.1, 0.7, false),
            (-2.0, 0.3, -0.12, 0.4, false),
            (0.5, 0.5, 0.05, 0.3, true),
            (0.2, -0.7, -0.06, 0.8, true),
            (-0.6, 0.4, 0.09, 1.3, true),
        ];
        for &(h, gamma, delta, t, aniso) in cases {
            let par = p(h, gamma);
            let (q, coords) = if aniso {
                (
                    QuenchSpec::anisotropic(delta).unwrap(),
                    Coords::TimeAnisotropy,
                )
            } else {
                (QuenchSpec::transverse(delta).unwrap(), Coords::TimeField)
            };
            let series = smalltime_series(par, q, t).unwrap();
            let metric = qim_closed(par, q, t, Regime::SmallTime, coords).unwrap();
            let lhs = 3.0 * series.value;
            let rhs = metric.line_element_sq(t, delta) - series.regular;
            assert_relative_eq!(lhs, rhs, epsilon = 1e-18, max_relative = 1e-12);
        }
    }

    #[test]
    fn dephased_coupling_block_matches_the_echo_decay_odd_part() {
        // The shift-odd part of the dephased g_xx times delta^2 equals the
        // shift-odd part of the large-time echo series: both reduce to the
        // same h delta^3 / (8 |gamma| (1 - h^2)^2) term.
        let par = p(0.5, 0.5);
        let t = 500.0;
        let g = |delta: f64| {
            qim_closed(
                par,
                QuenchSpec::transverse(delta).unwrap(),
                t,
                Regime::LargeTime,
                Coords::TimeField,
            )
            .unwrap()
            .g_xx
        };
        let s = |delta: f64| {
            larget_series(par, QuenchSpec::transverse(delta).unwrap())
                .unwrap()
                .value
        };
        let d = 0.01;
        let lhs = 0.5 * (g(d) - g(-d)) * d * d;
        let rhs = 0.5 * (s(d) - s(-d));
        assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
    }

    #[test]
    fn unsupported_regions_are_reported() {
        let q_t = QuenchSpec::transverse(0.05).unwrap();
        let q_a = QuenchSpec::anisotropic(0.05).unwrap();
        for (params, q, regime, coords) in [
            (p(0.5, 0.5), q_a, Regime::LargeTime, Coords::TimeAnisotropy),
            (p(1.0, 0.5), q_t, Regime::LargeTime, Coords::TimeField),
            (p(1.2, 0.5), q_a, Regime::SmallTime, Coords::TimeAnisotropy),
            (p(0.5, 0.5), q_t, Regime::SmallTime, Coords::TimeAnisotropy),
        ] {
            let err = qim_closed(params, q, 0.5, regime, coords).unwrap_err();
            assert!(matches!(err, MetricError::Unsupported { .. }), "{err}");
        }
    }
}
