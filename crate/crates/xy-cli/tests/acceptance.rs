//! Acceptance gate for the whole toolkit. Each test checks one numbered
//! criterion end to end and prints a single PASS/FAIL line (visible with
//! `--nocapture`) followed by the measured margins of its legs, so a run
//! doubles as a quantitative report.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xy_core::{ModelParams, MomentumGrid, QuenchSpec};
use xy_geodesic::{
    geodesic_shoot, tau_of_h, DxInit, LargeTimeField, ShootConfig, SmallTimeField,
};
use xy_metric::{qim_closed, qim_sum, Coords, Regime};
use xy_quench::{
    larget_limit, loschmidt, nielsen_quench, oscillation_envelope, smalltime_series,
    time_average,
};
use xy_scaling::{
    fit_law, fit_size_scaling, CriticalApproach, LambdaSel, Law, ScalingRun, TimeRegime,
};
use xy_static::{nielsen_series, nielsen_static, triangle_defect, triangle_map, Direction, LegOrder};

fn p(h: f64, gamma: f64) -> ModelParams {
    ModelParams::new(h, gamma).unwrap()
}

fn tq(delta: f64) -> QuenchSpec {
    QuenchSpec::transverse(delta).unwrap()
}

/// Prints the criterion verdict and its leg details, then enforces it.
fn report(criterion: &str, legs: Vec<(String, bool)>) {
    let ok = legs.iter().all(|(_, pass)| *pass);
    println!("{criterion}: {}", if ok { "PASS" } else { "FAIL" });
    for (detail, pass) in &legs {
        println!("  [{}] {detail}", if *pass { "ok" } else { "FAIL" });
    }
    assert!(ok, "{criterion} failed; see the printed legs");
}

fn runtime_leg(elapsed: Duration, budget: f64) -> (String, bool) {
    (
        format!("runtime {:.2} s within {budget} s", elapsed.as_secs_f64()),
        elapsed.as_secs_f64() < budget,
    )
}

#[test]
fn c01_static_series_match_the_exact_integral() {
    let start = Instant::now();
    let grid = MomentumGrid::thermo();
    let delta = 0.01;
    let directions = [Direction::H, Direction::Gamma, Direction::Diagonal];
    let mut worst = [(0.0f64, 0.0, 0.0); 3];
    for &h in &[-0.8, 0.0, 0.8] {
        for &gamma in &[0.3, 0.5, 1.0] {
            let reference = p(h, gamma);
            for (slot, &dir) in directions.iter().enumerate() {
                let target = match dir {
                    Direction::H => p(h + delta, gamma),
                    Direction::Gamma => p(h, gamma + delta),
                    Direction::Diagonal => p(h + delta, gamma + delta),
                };
                let exact = nielsen_static(reference, target, &grid).unwrap();
                let series = nielsen_series(reference, delta, dir);
                assert!(series.valid, "series unavailable at ({h}, {gamma})");
                let rel = (series.value - exact).abs() / exact;
                if rel > worst[slot].0 {
                    worst[slot] = (rel, h, gamma);
                }
            }
        }
    }
    let legs = vec![
        (
            format!("field-shift series: max rel {:.3e} < 1e-3", worst[0].0),
            worst[0].0 < 1e-3,
        ),
        (
            format!("anisotropy-shift series: max rel {:.3e} < 1e-3", worst[1].0),
            worst[1].0 < 1e-3,
        ),
        (
            format!(
                "diagonal-shift series: max rel {:.3e} at (h, gamma) = ({}, {}) < 1e-3; \
                 the diagonal expansion carries only its leading term",
                worst[2].0, worst[2].1, worst[2].2
            ),
            worst[2].0 < 1e-3,
        ),
        runtime_leg(start.elapsed(), 10.0),
    ];
    report("C1 static series vs exact integral", legs);
}

#[test]
fn c02_small_time_echo_tracks_complexity() {
    let start = Instant::now();
    let grid = MomentumGrid::thermo();
    let q = tq(0.1);
    let hs: Vec<f64> = (-20..=20)
        .map(|i| i as f64 * 0.1)
        .filter(|&h| {
            smalltime_series(p(h, 0.5), q, 0.5)
                .map(|s| s.valid)
                .unwrap_or(false)
        })
        .collect();
    assert!(hs.len() > 10, "guard bands left too few sample points");

    let mut worst_echo = (0.0f64, 0.0, 0.0);
    for &h in &hs {
        for &t in &[0.5, 1.0, 1.5] {
            let cn = nielsen_quench(p(h, 0.5), q, t, &grid).unwrap().value;
            let ll = loschmidt(p(h, 0.5), q, t, &grid).unwrap().value;
            let rel = (ll + cn).abs() / cn;
            if rel > worst_echo.0 {
                worst_echo = (rel, h, t);
            }
        }
    }
    let mut worst_series = (0.0f64, 0.0);
    for &h in &hs {
        let s = smalltime_series(p(h, 0.5), q, 0.5).unwrap();
        let exact = nielsen_quench(p(h, 0.5), q, 0.5, &grid).unwrap().value;
        let rel = (s.value - exact).abs() / exact;
        if rel > worst_series.0 {
            worst_series = (rel, h);
        }
    }
    let legs = vec![
        (
            format!(
                "|log L + C_N|/C_N: max {:.3e} at (h, t) = ({}, {}) < 1e-2",
                worst_echo.0, worst_echo.1, worst_echo.2
            ),
            worst_echo.0 < 1e-2,
        ),
        (
            format!(
                "small-time series vs exact C_N at t = 0.5: max rel {:.4} at h = {} < 0.05",
                worst_series.0, worst_series.1
            ),
            worst_series.0 < 0.05,
        ),
        runtime_leg(start.elapsed(), 30.0),
    ];
    report("C2 small-time echo and complexity agree", legs);
}

#[test]
fn c03_time_time_metric_component_is_exact() {
    let start = Instant::now();
    let grid = MomentumGrid::thermo();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = (0.0f64, 0.0, 0.0, 0.0);
    for i in 0..20 {
        let h = if i % 2 == 0 {
            rng.gen_range(-0.85..0.85)
        } else {
            let side: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            side * rng.gen_range(1.15..2.0)
        };
        let side: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let gamma = side * rng.gen_range(0.25..0.85);
        let delta = rng.gen_range(0.01..0.2);
        let t = rng.gen_range(0.0..3.0);
        let q = tq(delta);
        let m = qim_sum(p(h, gamma), q, t, Coords::TimeField, &grid).unwrap();
        let ga = gamma.abs();
        let expected = if h.abs() < 1.0 {
            ga * delta * delta / (2.0 * (1.0 + ga))
        } else {
            let a = (h * h + gamma * gamma - 1.0).sqrt();
            gamma * gamma * delta * delta * (h.abs() - a) / (2.0 * a * (1.0 - gamma * gamma))
        };
        let rel = (m.g_tt - expected).abs() / expected;
        if rel > worst.0 {
            worst = (rel, h, gamma, delta);
        }
    }
    let legs = vec![
        (
            format!(
                "numeric g_tt vs closed form: max rel {:.3e} at (h, gamma, delta) = \
                 ({:.3}, {:.3}, {:.3}) < 1e-6",
                worst.0, worst.1, worst.2, worst.3
            ),
            worst.0 < 1e-6,
        ),
        runtime_leg(start.elapsed(), 60.0),
    ];
    report("C3 time-time metric component is exact", legs);
}

#[test]
fn c04_identity_links_complexity_and_line_element() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut worst = (0.0f64, 0.0, 0.0, false);
    let mut checked = 0usize;
    while checked < 100 {
        let transverse = checked % 2 == 0;
        let h = if transverse && rng.gen_bool(0.3) {
            let side: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            side * rng.gen_range(1.3..1.9)
        } else {
            rng.gen_range(-0.75..0.75)
        };
        let side: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let gamma = side * rng.gen_range(0.3..0.8);
        let delta = rng.gen_range(0.005..0.05);
        let t = rng.gen_range(0.01..0.2);
        let q = if transverse {
            QuenchSpec::transverse(delta)
        } else {
            QuenchSpec::anisotropic(delta)
        }
        .unwrap();
        let s = match smalltime_series(p(h, gamma), q, t) {
            Ok(s) if s.valid => s,
            _ => continue,
        };
        let m = match qim_closed(p(h, gamma), q, t, Regime::SmallTime, Coords::for_quench(q.kind))
        {
            Ok(m) => m,
            Err(_) => continue,
        };
        let dtau2 = m.g_tt * t * t + 2.0 * m.g_tx * t * delta + m.g_xx * delta * delta;
        let lhs = 3.0 * s.value;
        let rhs = dtau2 - s.regular;
        let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        if rel > worst.0 {
            worst = (rel, h, gamma, transverse);
        }
        checked += 1;
    }
    let legs = vec![(
        format!(
            "3 C_N vs line element minus background over 100 draws, both quench kinds: \
             max rel {:.3e} at (h, gamma) = ({:.3}, {:.3}, transverse = {}) < 1e-10",
            worst.0, worst.1, worst.2, worst.3
        ),
        worst.0 < 1e-10,
    )];
    report("C4 complexity equals the line element", legs);
}

#[test]
fn c05_late_time_average_matches_the_dephased_limit() {
    let start = Instant::now();
    let params = p(0.5, 0.5);
    let q = tq(0.01);
    let chain = MomentumGrid::finite(4001).unwrap();
    let thermo = MomentumGrid::thermo();
    let avg = time_average(params, q, 500.0, 1000.0, 0.075, &chain).unwrap();
    let limit = larget_limit(params, q, &thermo).unwrap();
    let avg_rel = (avg.value / limit - 1.0).abs();

    let (h, ga, d): (f64, f64, f64) = (0.5, 0.5, 0.01);
    let u = 1.0 - h * h;
    let static_leading = d * d / (16.0 * ga * u) + h * d.powi(3) / (16.0 * ga * u * u);
    let doubling_rel = (limit / (2.0 * static_leading) - 1.0).abs();

    let legs = vec![
        (
            format!("window average [500, 1000] vs limit: rel {:.3e} < 0.01", avg_rel),
            avg_rel < 0.01,
        ),
        (
            format!(
                "limit vs twice the static leading series: rel {:.3e} < 0.01",
                doubling_rel
            ),
            doubling_rel < 0.01,
        ),
        runtime_leg(start.elapsed(), 120.0),
    ];
    report("C5 infinite-time limit doubles the static series", legs);
}

#[test]
fn c06_oscillation_dichotomy_across_the_transition() {
    let grid = MomentumGrid::thermo();
    let q = tq(0.1);
    let ratio = |h: f64| {
        let e = oscillation_envelope(p(h, 0.5), q, 50.0, 150.0, &grid).unwrap();
        e.amplitude / e.mean
    };
    let r08 = ratio(0.8);
    let r09 = ratio(0.9);
    let r10 = ratio(1.0);
    let r11 = ratio(1.1);
    let legs = vec![
        (
            format!("critical chain keeps oscillating: ratio(h=1) = {:.4} > 0.1", r10),
            r10 > 0.1,
        ),
        (
            format!("quench onto the transition dephases: ratio(h=0.9) = {:.5} < 0.01", r09),
            r09 < 0.01,
        ),
        (
            format!(
                "ranking matches the time-series panel: {:.4} (h=1) above {:.4} (h=0.8) \
                 and {:.4} (h=1.1), both above {:.5} (h=0.9)",
                r10, r08, r11, r09
            ),
            r10 > r08 && r10 > r11 && r08 > r09 && r11 > r09,
        ),
    ];
    report("C6 oscillation envelope dichotomy", legs);
}

#[test]
fn c07_echo_bounds_complexity_everywhere() {
    let grid = MomentumGrid::finite(1001).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut min_margin = f64::INFINITY;
    let mut at = (0.0, 0.0, 0.0, 0.0);
    let mut checked = 0usize;
    while checked < 10_000 {
        let h = rng.gen_range(-2.0..2.0);
        let gamma = rng.gen_range(-1.5..1.5);
        let delta = rng.gen_range(-0.5..0.5);
        let t = rng.gen_range(0.0..30.0);
        let q = if checked % 2 == 0 {
            QuenchSpec::transverse(delta)
        } else {
            QuenchSpec::anisotropic(delta)
        }
        .unwrap();
        let params = p(h, gamma);
        let (cn, ll) = match (
            nielsen_quench(params, q, t, &grid),
            loschmidt(params, q, t, &grid),
        ) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            _ => continue,
        };
        let margin = -ll - cn;
        if margin < min_margin {
            min_margin = margin;
            at = (h, gamma, delta, t);
        }
        checked += 1;
    }
    let legs = vec![(
        format!(
            "-log L - C_N over 10^4 draws: min margin {:.3e} at (h, gamma, delta, t) = \
             ({:.3}, {:.3}, {:.3}, {:.3}) >= -1e-12",
            min_margin, at.0, at.1, at.2, at.3
        ),
        min_margin >= -1e-12,
    )];
    report("C7 echo bounds complexity", legs);
}

#[test]
fn c08_geodesics_expose_the_critical_exponent() {
    let field = LargeTimeField::new(0.5, 0.1).unwrap();
    let mut shoot = ShootConfig::new(200.0, 0.95);
    shoot.dx_init = DxInit::FeasibleFraction(0.5);
    let sol = geodesic_shoot(&field, &shoot).unwrap();
    let map = tau_of_h(&sol).unwrap();
    let slope = map.loglog_slope(1.0, 1e-4, 1e-2);

    let small = SmallTimeField::new(0.5, 0.1).unwrap();
    let mut shoot = ShootConfig::new(0.01, 0.88);
    shoot.dx_init = DxInit::Fixed(-0.1);
    let sol = geodesic_shoot(&small, &shoot).unwrap();
    let small_map = xy_geodesic::HTauMap::from_monotone_tail(&sol).unwrap();
    let (lo, hi) = small_map.x_range();
    let top = hi.min(0.999);
    let mut max_slope = 0.0f64;
    let steps = 400;
    for i in 0..=steps {
        let x = lo + (top - lo) * i as f64 / steps as f64;
        if let Some(s) = small_map.slope_at(x) {
            max_slope = max_slope.max(s.abs());
        }
    }
    let legs = vec![
        (
            format!(
                "dephased-field log-log slope of dtau/dh vs (1-h): {:?} within -1.5 +- 0.2",
                slope
            ),
            slope.is_some_and(|s| (-1.7..=-1.3).contains(&s)),
        ),
        (
            format!(
                "early-window field stays regular: max |dtau/dh| {:.3e} up to h = 0.999 \
                 is finite and below 10",
                max_slope
            ),
            max_slope.is_finite() && max_slope < 10.0,
        ),
    ];
    report("C8 geodesic approach to the transition", legs);
}

#[test]
fn c09_scaling_laws_in_size_and_distance() {
    let base = p(0.8, 0.5);
    let q = tq(0.1);
    let sizes = [501usize, 1001, 2001, 4001];
    let early = ScalingRun::measure(base, q, 0.5, &sizes, LambdaSel::Field, TimeRegime::Auto)
        .unwrap();
    let early_fit = fit_size_scaling(&early).unwrap();
    let late = ScalingRun::measure(base, q, 500.0, &sizes, LambdaSel::Field, TimeRegime::Dephased)
        .unwrap();
    let late_fit = fit_size_scaling(&late).unwrap();

    let distances: Vec<f64> = (0..10).map(|i| 0.02 + 0.02 * i as f64).collect();
    let template = p(0.5, 0.5);
    let early_approach = CriticalApproach::measure(
        template,
        q,
        0.5,
        1001,
        LambdaSel::Field,
        TimeRegime::Auto,
        &distances,
    )
    .unwrap();
    let early_law = fit_law(&early_approach).unwrap();
    let late_approach = CriticalApproach::measure(
        template,
        q,
        500.0,
        1001,
        LambdaSel::Field,
        TimeRegime::Dephased,
        &distances,
    )
    .unwrap();
    let late_law = fit_law(&late_approach).unwrap();

    let legs = vec![
        (
            format!(
                "derivative grows linearly with N: R^2 {:.6} (t = 0.5) and {:.6} \
                 (t = 500, dephased) both > 0.999",
                early_fit.r_squared, late_fit.r_squared
            ),
            early_fit.r_squared > 0.999 && late_fit.r_squared > 0.999,
        ),
        (
            format!(
                "early approach picks the linear law: {:?}, R^2 {:.6} > competing {:.6}",
                early_law.law, early_law.r_squared, early_law.competing_r_squared
            ),
            early_law.law == Law::Linear
                && early_law.r_squared > early_law.competing_r_squared,
        ),
        (
            format!(
                "dephased approach picks the logarithmic law: {:?}, R^2 {:.6} > competing {:.6}",
                late_law.law, late_law.r_squared, late_law.competing_r_squared
            ),
            late_law.law == Law::Logarithmic
                && late_law.r_squared > late_law.competing_r_squared,
        ),
    ];
    report("C9 finite-size and critical-approach scaling", legs);
}

fn defect_leading(h: f64, gamma: f64, delta: f64) -> f64 {
    if h.abs() < 1.0 {
        let u = 1.0 - h * h;
        delta.powi(3) / (32.0 * gamma * gamma * u)
            + delta.powi(4) * (8.0 * gamma * h - 3.0 * u)
                / (192.0 * gamma.powi(3) * u * u)
    } else {
        let a = (h * h + gamma * gamma - 1.0).sqrt();
        gamma * delta * delta / (8.0 * a.powi(3))
    }
}

#[test]
fn c10_triangle_defect_stays_positive_and_peaks_at_the_multicritical_point() {
    let grid = MomentumGrid::thermo();
    let delta = 0.1;
    let hs: Vec<f64> = (0..41).map(|i| i as f64 * 0.05).collect();
    let gammas: Vec<f64> = (0..20).map(|i| 0.05 + i as f64 * 0.05).collect();
    let map = triangle_map(&hs, &gammas, delta, LegOrder::HFirst, &grid).unwrap();

    let mut min_defect = f64::INFINITY;
    let mut finite = 0usize;
    for &v in &map.values {
        if v.is_finite() {
            finite += 1;
            min_defect = min_defect.min(v);
        }
    }
    let (max_h, max_gamma, max_defect) = map.max_point().unwrap();
    let dist = ((max_h - 1.0).powi(2) + max_gamma.powi(2)).sqrt();

    let closed_rel = |h: f64, gamma: f64| {
        let numeric = triangle_defect(p(h, gamma), delta, LegOrder::HFirst, &grid).unwrap();
        (defect_leading(h, gamma, delta) - numeric).abs() / numeric
    };
    let rel_ordered = closed_rel(0.5, 0.5);
    let rel_para = closed_rel(1.5, 0.5);

    let legs = vec![
        (
            format!(
                "defect is non-negative on all {finite} finite cells: min {:.3e} >= -1e-12",
                min_defect
            ),
            min_defect >= -1e-12,
        ),
        (
            format!(
                "grid maximum {:.4e} sits at ({max_h}, {max_gamma}), distance {:.3} \
                 from (1, 0) < 0.15",
                max_defect, dist
            ),
            dist < 0.15,
        ),
        (
            format!(
                "closed leading terms at (0.5, 0.5): rel {:.4} < 0.15",
                rel_ordered
            ),
            rel_ordered < 0.15,
        ),
        (
            format!(
                "closed leading terms at (1.5, 0.5): rel {:.4} < 0.15",
                rel_para
            ),
            rel_para < 0.15,
        ),
    ];
    report("C10 triangle-defect map", legs);
}
