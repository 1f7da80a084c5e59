//! Initial-value geodesic shooting with an adaptive Dormand-Prince 5(4)
//! stepper.
//!
//! The state is (t, x, dt/dtau, dx/dtau). Acceleration comes from the
//! connection coefficients; after every accepted step the velocity is
//! rescaled back onto the unit-speed shell, and the pre-rescale residual is
//! retained with the sample as a quality record.

use rayon::prelude::*;

use crate::christoffel::christoffel;
use crate::error::GeodesicError;
use crate::field::MetricField;
use xy_metric::Metric2D;

type State = [f64; 4];

/// How the initial coupling velocity is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DxInit {
    /// Literal value of dx/dtau.
    Fixed(f64),
    /// `q / sqrt(g_xx)`: a signed fraction of the coupling speed that
    /// exhausts the unit-norm budget, for fields whose coupling block is
    /// too large for any literal choice.
    FeasibleFraction(f64),
}

/// Shooting configuration; `new` fills in the conventional defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootConfig {
    pub t0: f64,
    pub x0: f64,
    pub dx_init: DxInit,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Distance from the coupling edges of the domain at which integration
    /// stops; keeps the trajectory clear of the critical-line divergence.
    pub boundary_margin: f64,
}

impl ShootConfig {
    pub fn new(t0: f64, x0: f64) -> Self {
        Self {
            t0,
            x0,
            dx_init: DxInit::Fixed(-0.1),
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_steps: 200_000,
            boundary_margin: 1e-4,
        }
    }
}

/// Why integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    /// Reached the domain box or the margin before a coupling edge.
    Boundary,
    /// Entered a region the field masks out.
    Mask,
    /// Exhausted the step budget (or stalled below the step floor).
    MaxSteps,
}

/// One retained point of the trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub tau: f64,
    pub t: f64,
    pub x: f64,
    /// |g(v, v) - 1| before the velocity rescale at this point.
    pub residual: f64,
}

/// An integrated geodesic.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSolution {
    pub samples: Vec<Sample>,
    pub terminal: Terminal,
    /// Both solutions of the unit-speed condition for dt/dtau at the start;
    /// the first entry is the one integrated.
    pub velocity_roots: (f64, f64),
}

fn speed(m: &Metric2D, vt: f64, vx: f64) -> f64 {
    m.g_tt * vt * vt + 2.0 * m.g_tx * vt * vx + m.g_xx * vx * vx
}

fn rhs(field: &dyn MetricField, y: &State) -> Result<State, GeodesicError> {
    let gamma = christoffel(field, y[0], y[1])?;
    let v = [y[2], y[3]];
    let mut acc = [0.0f64; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                acc[a] -= gamma[a][b][c] * v[b] * v[c];
            }
        }
    }
    Ok([y[2], y[3], acc[0], acc[1]])
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for i in 0..4 {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// One trial step: the fifth-order advance and a scaled error norm.
fn try_step(
    field: &dyn MetricField,
    y: &State,
    h: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<(State, f64), GeodesicError> {
    let k1 = rhs(field, y)?;
    let k2 = rhs(field, &axpy(y, h, &[(A21, &k1)]))?;
    let k3 = rhs(field, &axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
    let k4 = rhs(field, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = rhs(
        field,
        &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = rhs(
        field,
        &axpy(
            y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    )?;
    let y5 = axpy(
        y,
        h,
        &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
    );
    let k7 = rhs(field, &y5)?;
    let mut err_sq = 0.0;
    for i in 0..4 {
        let e = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let scale = abs_tol + rel_tol * y[i].abs().max(y5[i].abs());
        let r = e / scale;
        err_sq += r * r;
    }
    Ok((y5, (err_sq / 4.0).sqrt()))
}

fn classify_stop(field: &dyn MetricField, cfg: &ShootConfig, t: f64, x: f64) -> Option<Terminal> {
    let dom = field.domain();
    if !dom.contains(t, x)
        || x >= dom.x_max - cfg.boundary_margin
        || x <= dom.x_min + cfg.boundary_margin
    {
        return Some(Terminal::Boundary);
    }
    if !field.admissible(t, x) {
        return Some(Terminal::Mask);
    }
    None
}

/// Integrate a unit-speed geodesic from `(t0, x0)` until it reaches the
/// domain boundary, a masked region, or the step budget.
pub fn geodesic_shoot(
    field: &dyn MetricField,
    cfg: &ShootConfig,
) -> Result<GeodesicSolution, GeodesicError> {
    let m0 = field.evaluate(cfg.t0, cfg.x0)?;
    let vx0 = match cfg.dx_init {
        DxInit::Fixed(v) => v,
        DxInit::FeasibleFraction(q) => {
            if m0.g_xx <= 0.0 {
                return Err(GeodesicError::NoRealVelocity {
                    t: cfg.t0,
                    x: cfg.x0,
                    discriminant: m0.g_xx,
                });
            }
            q / m0.g_xx.sqrt()
        }
    };
    // Unit speed fixes dt/dtau through a quadratic; forward time takes the
    // upper root, and both are kept for the record.
    let (a, b, c) = (m0.g_tt, 2.0 * m0.g_tx * vx0, m0.g_xx * vx0 * vx0 - 1.0);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 || a <= 0.0 {
        return Err(GeodesicError::NoRealVelocity {
            t: cfg.t0,
            x: cfg.x0,
            discriminant: disc,
        });
    }
    let root_hi = (-b + disc.sqrt()) / (2.0 * a);
    let root_lo = (-b - disc.sqrt()) / (2.0 * a);
    let mut y: State = [cfg.t0, cfg.x0, root_hi, vx0];
    let mut tau = 0.0;
    let mut samples = vec![Sample {
        tau,
        t: y[0],
        x: y[1],
        residual: (speed(&m0, y[2], y[3]) - 1.0).abs(),
    }];
    if let Some(terminal) = classify_stop(field, cfg, y[0], y[1]) {
        return Ok(GeodesicSolution {
            samples,
            terminal,
            velocity_roots: (root_hi, root_lo),
        });
    }

    let f0 = rhs(field, &y)?;
    let norm_y = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let norm_f = f0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut step = (1e-6 * (1.0 + norm_y) / (1.0 + norm_f)).min(1e-3);

    let mut terminal = Terminal::MaxSteps;
    for _attempt in 0..cfg.max_steps {
        let floor = 1e-14 * tau.abs().max(1.0);
        if step < floor {
            break;
        }
        match try_step(field, &y, step, cfg.rel_tol, cfg.abs_tol) {
            Err(_) => {
                // A stage left the field's good region; retreat and retry.
                step *= 0.5;
                continue;
            }
            Ok((y5, err)) => {
                if err <= 1.0 {
                    tau += step;
                    y = y5;
                    let m = field.evaluate(y[0], y[1])?;
                    let s = speed(&m, y[2], y[3]);
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(GeodesicError::LostNormalization { tau, norm: s });
                    }
                    let residual = (s - 1.0).abs();
                    let inv = 1.0 / s.sqrt();
                    y[2] *= inv;
                    y[3] *= inv;
                    samples.push(Sample {
                        tau,
                        t: y[0],
                        x: y[1],
                        residual,
                    });
                    if let Some(reason) = classify_stop(field, cfg, y[0], y[1]) {
                        terminal = reason;
                        break;
                    }
                }
                let factor = if err > 0.0 {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                } else {
                    5.0
                };
                step *= factor;
            }
        }
    }
    Ok(GeodesicSolution {
        samples,
        terminal,
        velocity_roots: (root_hi, root_lo),
    })
}

/// Shoot several configurations on one field in parallel.
pub fn shoot_many(
    field: &dyn MetricField,
    configs: &[ShootConfig],
) -> Vec<Result<GeodesicSolution, GeodesicError>> {
    configs
        .par_iter()
        .map(|cfg| geodesic_shoot(field, cfg))
        .collect()
}
