//! Cross-checks between the numerical metric, the closed forms, and the
//! complexity series, through the public interface only.

use approx::assert_relative_eq;
use num_complex::Complex64;
use xy_core::{ModelParams, MomentumGrid, QuenchSpec};
use xy_metric::{full_state_metric, qim_closed, qim_sum, Coords, Regime};
use xy_quench::smalltime_series;

#[test]
fn numerical_time_block_matches_the_closed_form_exactly() {
    // The closed g_tt is exact in both the shift and the time, so the
    // Brillouin average of the quantum geometric tensor must land on it to
    // quadrature precision, not merely to leading order.
    let grid = MomentumGrid::thermo();
    for &(h, gamma, delta, t) in &[(0.5, 0.5, 0.1, 0.9), (0.3, 0.8, -0.05, 4.0)] {
        let p = ModelParams::new(h, gamma).unwrap();
        let q = QuenchSpec::transverse(delta).unwrap();
        let numeric = qim_sum(p, q, t, Coords::TimeField, &grid).unwrap();
        let closed = qim_closed(p, q, t, Regime::SmallTime, Coords::TimeField).unwrap();
        assert_relative_eq!(numeric.g_tt, closed.g_tt, max_relative = 1e-8);
    }
}

#[test]
fn complexity_line_element_identity_through_public_api() {
    let p = ModelParams::new(0.5, 0.5).unwrap();
    let q = QuenchSpec::transverse(0.1).unwrap();
    let t = 0.4;
    let series = smalltime_series(p, q, t).unwrap();
    let metric = qim_closed(p, q, t, Regime::SmallTime, Coords::TimeField).unwrap();
    let lhs = 3.0 * series.value;
    let rhs = metric.line_element_sq(t, q.delta) - series.regular;
    assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
}

#[test]
fn decomposition_fields_reassemble_the_total() {
    let grid = MomentumGrid::finite(801).unwrap();
    let p = ModelParams::new(0.5, 0.5).unwrap();
    let q = QuenchSpec::transverse(0.1).unwrap();
    let k_g = Complex64::from_polar(0.6, 0.4);
    let k_e = Complex64::from_polar(0.8, -1.1);
    let d = full_state_metric(k_g, k_e, p, q, 0.3, Coords::TimeField, &grid).unwrap();
    let (w_g, w_e) = (d.weight_ground, d.weight_excited);
    assert_relative_eq!(w_g + w_e, 1.0, max_relative = 1e-12);
    let [a_t, a_x] = d.berry_diff;
    let cross = w_g * w_e;
    let tt = w_g * d.g_ground.g_tt + w_e * d.g_excited.g_tt + cross * a_t.norm_sqr();
    let tx = w_g * d.g_ground.g_tx + w_e * d.g_excited.g_tx + cross * (a_t * a_x.conj()).re;
    let xx = w_g * d.g_ground.g_xx + w_e * d.g_excited.g_xx + cross * a_x.norm_sqr();
    assert_relative_eq!(d.total.g_tt, tt, max_relative = 1e-14);
    assert_relative_eq!(d.total.g_tx, tx, max_relative = 1e-14);
    assert_relative_eq!(d.total.g_xx, xx, max_relative = 1e-14);
}
