//! Subcommand surface and dispatch. Every command funnels its flags and
//! optional config file through a [`RunConfig`], computes, then writes a
//! CSV and a manifest sidecar through the same atomic path.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use xy_core::{ModelParams, QuenchKind, QuenchSpec};
use xy_geodesic::{geodesic_shoot, DxInit, FieldConfig, FieldRegistry, ShootConfig};
use xy_metric::{qim_closed, qim_sum, Coords, Metric2D, Regime};
use xy_quench::{time_series, SeriesLabel};
use xy_scaling::{
    fit_law, fit_size_scaling, CriticalApproach, LambdaSel, ScalingRun, TimeRegime,
};
use xy_static::nielsen_static;

use crate::config::{Axis, RunConfig};
use crate::error::CliError;
use crate::figures::{defect_map, push_grid, Artifact, FigureRegistry};
use crate::manifest::Manifest;
use crate::sweep;
use crate::table::{fmt_float, Cell, Table};

#[derive(Parser)]
#[command(
    name = "xyc",
    version,
    about = "Complexity, echo, and information geometry of the quenched XY chain",
    after_help = "Worker threads follow the RAYON_NUM_THREADS environment variable."
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Ground-state circuit complexity between two coupling points
    #[command(name = "static")]
    Static(StaticArgs),
    /// Triangle-inequality defect over a coupling grid
    TriangleMap(MapArgs),
    /// Evolved-state complexity after a sudden quench
    Quench(DynArgs),
    /// Echo of the evolved state against the unquenched one
    Loschmidt(DynArgs),
    /// Information metric of the evolved state, numeric and closed forms
    Qim(QimArgs),
    /// Unit-speed geodesic on a selected metric field
    Geodesic(GeodesicArgs),
    /// Chain-length and critical-approach scaling of the complexity derivative
    Scaling(ScalingArgs),
    /// Rebuild the data set behind one of the nine bundled figures
    Figure(FigureArgs),
    /// Cartesian parameter sweep with resume support
    Sweep(SweepArgs),
}

#[derive(Args)]
pub struct StaticArgs {
    /// Plain-text key=value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Reference transverse field
    #[arg(long)]
    pub h: Option<String>,
    /// Reference anisotropy
    #[arg(long)]
    pub gamma: Option<String>,
    /// Target transverse field
    #[arg(long)]
    pub c1: Option<String>,
    /// Target anisotropy
    #[arg(long)]
    pub c2: Option<String>,
    /// Momentum grid: thermo, thermo:<tol>, or finite:<n>
    #[arg(long)]
    pub grid: Option<String>,
    /// Output CSV path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct MapArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transverse-field range start:end:count
    #[arg(long)]
    pub h: Option<String>,
    /// Anisotropy range start:end:count
    #[arg(long)]
    pub gamma: Option<String>,
    /// Coupling shift of each leg
    #[arg(long)]
    pub delta: Option<String>,
    /// Two-leg route: h-first or gamma-first
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DynArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transverse field
    #[arg(long)]
    pub h: Option<String>,
    /// Anisotropy
    #[arg(long)]
    pub gamma: Option<String>,
    /// Quench size
    #[arg(long)]
    pub delta: Option<String>,
    /// Quenched coupling: transverse or anisotropic
    #[arg(long)]
    pub kind: Option<String>,
    /// Time, or a start:end:count range
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct QimArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transverse field; range it for a transverse quench
    #[arg(long)]
    pub h: Option<String>,
    /// Anisotropy; range it for an anisotropy quench
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub kind: Option<String>,
    /// Evaluation time
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GeodesicArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Metric field: small-time, large-time, or numeric
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Launch time
    #[arg(long)]
    pub t0: Option<String>,
    /// Launch coupling
    #[arg(long)]
    pub h0: Option<String>,
    /// Fixed initial dh/dtau
    #[arg(long)]
    pub dh0: Option<String>,
    /// Launch as a fraction of the fastest unit-speed coupling rate;
    /// overrides dh0 when given
    #[arg(long)]
    pub q: Option<String>,
    /// Relative step tolerance of the integrator
    #[arg(long)]
    pub rel_tol: Option<String>,
    /// Absolute step tolerance of the integrator
    #[arg(long)]
    pub abs_tol: Option<String>,
    #[arg(long)]
    pub max_steps: Option<String>,
    /// Stop margin inside the domain edges
    #[arg(long)]
    pub margin: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// size (derivative vs chain length) or approach (vs distance to the
    /// transition)
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    /// instantaneous, dephased, or auto
    #[arg(long)]
    pub regime: Option<String>,
    /// Comma-separated odd chain lengths (size mode)
    #[arg(long)]
    pub sizes: Option<String>,
    /// Chain length (approach mode)
    #[arg(long)]
    pub n: Option<String>,
    /// Distance range start:end:count (approach mode)
    #[arg(long)]
    pub distances: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FigureArgs {
    /// Figure number, 1 through 9
    pub n: u8,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a recipe key, as key=value; repeatable
    #[arg(long, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transverse field value or range
    #[arg(long)]
    pub h: Option<String>,
    /// Anisotropy value or range
    #[arg(long)]
    pub gamma: Option<String>,
    /// Quench size value or range
    #[arg(long)]
    pub delta: Option<String>,
    /// Time value or range
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Static(a) => static_cmd(a),
        Cmd::TriangleMap(a) => triangle_map_cmd(a),
        Cmd::Quench(a) => dynamics_cmd(a, SeriesLabel::Nielsen),
        Cmd::Loschmidt(a) => dynamics_cmd(a, SeriesLabel::NegLogEcho),
        Cmd::Qim(a) => qim_cmd(a),
        Cmd::Geodesic(a) => geodesic_cmd(a),
        Cmd::Scaling(a) => scaling_cmd(a),
        Cmd::Figure(a) => figure_cmd(a),
        Cmd::Sweep(a) => sweep::sweep_cmd(a),
    }
}

pub(crate) fn build_cfg(
    command: &str,
    defaults: &[(&str, &str)],
    config: &Option<PathBuf>,
    flags: &[(&str, &Option<String>)],
    out: &Option<PathBuf>,
    allowed: &[&str],
) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(command);
    cfg.defaults(defaults);
    if let Some(path) = config {
        cfg.load_file(path)?;
    }
    for (key, value) in flags {
        if let Some(value) = value {
            cfg.set_flag(key, value.clone());
        }
    }
    if let Some(out) = out {
        cfg.set_flag("out", out.display().to_string());
    }
    cfg.validate_keys(allowed)?;
    Ok(cfg)
}

pub(crate) fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest")
}

/// Writes the CSV, then the manifest; a manifest failure removes the CSV
/// so no half-delivered pair survives.
fn emit(art: &Artifact, cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let out = PathBuf::from(cfg.require("out")?);
    let man = manifest_path(&out);
    art.table.write(&out)?;
    if let Err(e) = art.manifest.write(&man) {
        let _ = std::fs::remove_file(&out);
        return Err(e);
    }
    println!(
        "wrote {} rows to {} (manifest {})",
        art.table.len(),
        out.display(),
        man.display()
    );
    Ok(out)
}

fn static_cmd(a: StaticArgs) -> Result<(), CliError> {
    let cfg = build_cfg(
        "static",
        &[("h", "0.5"), ("gamma", "0.5"), ("grid", "thermo"), ("out", "static.csv")],
        &a.config,
        &[
            ("h", &a.h),
            ("gamma", &a.gamma),
            ("c1", &a.c1),
            ("c2", &a.c2),
            ("grid", &a.grid),
        ],
        &a.out,
        &["h", "gamma", "c1", "c2", "grid", "out"],
    )?;
    let reference = ModelParams::new(cfg.require_f64("h")?, cfg.require_f64("gamma")?)?;
    let target = ModelParams::new(cfg.require_f64("c1")?, cfg.require_f64("c2")?)?;
    let grid = cfg.require_grid("grid")?;
    let cn = nielsen_static(reference, target, &grid)?;

    let mut table = Table::new(&["h", "gamma", "target_h", "target_gamma", "cn"]);
    table.push_floats(&[reference.h, reference.gamma, target.h, target.gamma, cn]);
    let mut man = Manifest::new(cfg.command());
    man.push_config(&cfg);
    push_grid(&mut man, &grid);
    println!("cn = {}", fmt_float(cn));
    emit(
        &Artifact {
            table,
            manifest: man,
        },
        &cfg,
    )?;
    Ok(())
}

fn triangle_map_cmd(a: MapArgs) -> Result<(), CliError> {
    let cfg = build_cfg(
        "triangle-map",
        &[
            ("h", "0:2:41"),
            ("gamma", "0.05:1:20"),
            ("delta", "0.1"),
            ("order", "h-first"),
            ("grid", "thermo"),
            ("out", "triangle-map.csv"),
        ],
        &a.config,
        &[
            ("h", &a.h),
            ("gamma", &a.gamma),
            ("delta", &a.delta),
            ("order", &a.order),
            ("grid", &a.grid),
        ],
        &a.out,
        &["h", "gamma", "delta", "order", "grid", "out"],
    )?;
    let mut man = Manifest::new(cfg.command());
    man.push_config(&cfg);
    let art = defect_map(&cfg, man)?;
    if let Some(v) = art.manifest.get("max_defect") {
        println!(
            "max defect {} at h={} gamma={}",
            v,
            art.manifest.get("max_h").unwrap_or("?"),
            art.manifest.get("max_gamma").unwrap_or("?"),
        );
    }
    emit(&art, &cfg)?;
    Ok(())
}

fn require_times(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let times = cfg.require_axis("t")?.values();
    for pair in times.windows(2) {
        if pair[1] <= pair[0] {
            return Err(CliError::InvalidValue {
                key: "t".into(),
                line: None,
                message: "time range must be strictly increasing".into(),
            });
        }
    }
    Ok(times)
}

fn dynamics_cmd(a: DynArgs, label: SeriesLabel) -> Result<(), CliError> {
    let command = match label {
        SeriesLabel::Nielsen => "quench",
        SeriesLabel::NegLogEcho => "loschmidt",
    };
    let default_out = format!("{command}.csv");
    let cfg = build_cfg(
        command,
        &[
            ("h", "0.5"),
            ("gamma", "0.5"),
            ("delta", "0.1"),
            ("kind", "transverse"),
            ("t", "1"),
            ("grid", "thermo"),
            ("out", &default_out),
        ],
        &a.config,
        &[
            ("h", &a.h),
            ("gamma", &a.gamma),
            ("delta", &a.delta),
            ("kind", &a.kind),
            ("t", &a.t),
            ("grid", &a.grid),
        ],
        &a.out,
        &["h", "gamma", "delta", "kind", "t", "grid", "out"],
    )?;
    let p = ModelParams::new(cfg.require_f64("h")?, cfg.require_f64("gamma")?)?;
    let q = QuenchSpec::new(cfg.require_kind("kind")?, cfg.require_f64("delta")?)?;
    let times = require_times(&cfg)?;
    let grid = cfg.require_grid("grid")?;
    let series = time_series(p, q, &times, label, &grid)?;

    let column = match label {
        SeriesLabel::Nielsen => "cn",
        SeriesLabel::NegLogEcho => "neg_log_echo",
    };
    let mut table = Table::new(&["t", column]);
    for (i, &t) in series.times.iter().enumerate() {
        table.push_floats(&[t, series.values[i]]);
    }
    let mut man = Manifest::new(cfg.command());
    man.push_config(&cfg);
    push_grid(&mut man, &grid);
    man.push("observable", series.label.as_str());
    man.push("resonance_clamped", series.clamped);
    if let [t] = times[..] {
        println!("{column}({t}) = {}", fmt_float(series.values[0]));
    }
    emit(
        &Artifact {
            table,
            manifest: man,
        },
        &cfg,
    )?;
    Ok(())
}

fn metric_cells(m: Result<Metric2D, xy_metric::MetricError>) -> [f64; 3] {
    match m {
        Ok(m) => [m.g_tt, m.g_tx, m.g_xx],
        Err(_) => [f64::NAN; 3],
    }
}

fn qim_cmd(a: QimArgs) -> Result<(), CliError> {
    let cfg = build_cfg(
        "qim",
        &[
            ("h", "-2:2:401"),
            ("gamma", "0.5"),
            ("delta", "0.1"),
            ("kind", "transverse"),
            ("t", "200"),
            ("grid", "thermo"),
            ("out", "qim.csv"),
        ],
        &a.config,
        &[
            ("h", &a.h),
            ("gamma", &a.gamma),
            ("delta", &a.delta),
            ("kind", &a.kind),
            ("t", &a.t),
            ("grid", &a.grid),
        ],
        &a.out,
        &["h", "gamma", "delta", "kind", "t", "grid", "out"],
    )?;
    let kind = cfg.require_kind("kind")?;
    let h_axis = cfg.require_axis("h")?;
    let gamma_axis = cfg.require_axis("gamma")?;
    let (axis, fixed, axis_name) = match kind {
        QuenchKind::Transverse => {
            if gamma_axis.is_range() {
                return Err(CliError::usage(
                    "a transverse quench sweeps h; gamma must be a single value",
                ));
            }
            (h_axis, gamma_axis, "h")
        }
        QuenchKind::Anisotropic => {
            if h_axis.is_range() {
                return Err(CliError::usage(
                    "an anisotropy quench sweeps gamma; h must be a single value",
                ));
            }
            (gamma_axis, h_axis, "gamma")
        }
    };
    let fixed = match fixed {
        Axis::Single(v) => v,
        Axis::Range { .. } => unreachable!(),
    };
    let q = QuenchSpec::new(kind, cfg.require_f64("delta")?)?;
    let t = cfg.require_f64("t")?;
    let grid = cfg.require_grid("grid")?;
    let coords = Coords::for_quench(kind);

    let xs = axis.values();
    let rows: Vec<[f64; 10]> = xs
        .par_iter()
        .map(|&x| {
            let p = match kind {
                QuenchKind::Transverse => ModelParams::new(x, fixed),
                QuenchKind::Anisotropic => ModelParams::new(fixed, x),
            };
            match p {
                Ok(p) => {
                    let numeric = metric_cells(qim_sum(p, q, t, coords, &grid));
                    let small = metric_cells(qim_closed(p, q, t, Regime::SmallTime, coords));
                    let large = metric_cells(qim_closed(p, q, t, Regime::LargeTime, coords));
                    [
                        x, numeric[0], numeric[1], numeric[2], small[0], small[1], small[2],
                        large[0], large[1], large[2],
                    ]
                }
                Err(_) => {
                    let mut row = [f64::NAN; 10];
                    row[0] = x;
                    row
                }
            }
        })
        .collect();

    let mut table = Table::new(&[
        axis_name,
        "g_tt",
        "g_tx",
        "g_xx",
        "small_g_tt",
        "small_g_tx",
        "small_g_xx",
        "large_g_tt",
        "large_g_tx",
        "large_g_xx",
    ]);
    for row in &rows {
        table.push_floats(row);
    }
    let mut man = Manifest::new(cfg.command());
    man.push_config(&cfg);
    push_grid(&mut man, &grid);
    man.push("coords", format!("(t, {})", coords.param_label()));
    emit(
        &Artifact {
            table,
            manifest: man,
        },
        &cfg,
    )?;
    Ok(())
}

fn geodesic_cmd(a: GeodesicArgs) -> Result<(), CliError> {
    let cfg = build_cfg(
        "geodesic",
        &[
            ("field", "small-time"),
            ("gamma", "0.5"),
            ("delta", "0.1"),
            ("t0", "0.01"),
            ("h0", "0.88"),
            ("dh0", "-0.1"),
            ("grid", "thermo"),
            ("out", "geodesic.csv"),
        ],
        &a.config,
        &[
            ("field", &a.field),
            ("gamma", &a.gamma),
            ("delta", &a.delta),
            ("t0", &a.t0),
            ("h0", &a.h0),
            ("dh0", &a.dh0),
            ("q", &a.q),
            ("rel_tol", &a.rel_tol),
            ("abs_tol", &a.abs_tol),
            ("max_steps", &a.max_steps),
            ("margin", &a.margin),
            ("grid", &a.grid),
        ],
        &a.out,
        &[
            "field", "gamma", "delta", "t0", "h0", "dh0", "q", "rel_tol", "abs_tol",
            "max_steps", "margin", "grid", "out",
        ],
    )?;
    let field_name = cfg.require("field")?.to_owned();
    let mut field_cfg = FieldConfig::new(cfg.require_f64("gamma")?, cfg.require_f64("delta")?);
    field_cfg.grid = cfg.require_grid("grid")?;
    let field = FieldRegistry::standard().build(&field_name, &field_cfg)?;

    let mut shoot = ShootConfig::new(cfg.require_f64("t0")?, cfg.require_f64("h0")?);
    let launch = match cfg.get("q") {
        Some(_) => {
            let q = cfg.require_f64("q")?;
            shoot.dx_init = DxInit::FeasibleFraction(q);
            format!("feasible-fraction {q}")
        }
        None => {
            let dh0 = cfg.require_f64("dh0")?;
            shoot.dx_init = DxInit::Fixed(dh0);
            format!("fixed {dh0}")
        }
    };
    if cfg.get("rel_tol").is_some() {
        shoot.rel_tol = cfg.require_f64("rel_tol")?;
    }
    if cfg.get("abs_tol").is_some() {
        shoot.abs_tol = cfg.require_f64("abs_tol")?;
    }
    if cfg.get("max_steps").is_some() {
        shoot.max_steps = cfg.require_usize("max_steps")?;
    }
    if cfg.get("margin").is_some() {
        shoot.boundary_margin = cfg.require_f64("margin")?;
    }
    let sol = geodesic_shoot(field.as_ref(), &shoot)?;

    let mut table = Table::new(&["tau", "t", "h"]);
    let mut max_residual: f64 = 0.0;
    for s in &sol.samples {
        max_residual = max_residual.max(s.residual.abs());
        table.push_floats(&[s.tau, s.t, s.x]);
    }
    let mut man = Manifest::new(cfg.command());
    man.push_config(&cfg);
    push_grid(&mut man, &field_cfg.grid);
    man.push("launch", &launch);
    man.push_f64("rel_tol_used", shoot.rel_tol);
    man.push_f64("abs_tol_used", shoot.abs_tol);
    man.push("max_steps_used", shoot.max_steps);
    man.push_f64("boundary_margin_used", shoot.boundary_margin);
    man.push("terminal", format!("{:?}", sol.terminal));
    man.push_f64("dt0_used", sol.velocity_roots.0);
    man.push_f64("dt0_other", sol.velocity_roots.1);
    man.push_f64("max_residual", max_residual);
    if let Some(last) = sol.samples.last() {
        man.push_f64("tau_end", last.tau);
        man.push_f64("t_end", last.t);
        man.push_f64("h_end", last.x);
        println!(
            "{} samples, terminal {:?}, end (tau, t, h) = ({}, {}, {})",
            sol.samples.len(),
            sol.terminal,
            fmt_float(last.tau),
            fmt_float(last.t),
            fmt_float(last.x),
        );
    }
    emit(
        &Artifact {
            table,
            manifest: man,
        },
        &cfg,
    )?;
    Ok(())
}

fn require_regime(cfg: &RunConfig) -> Result<TimeRegime, CliError> {
    match cfg.require("regime")? {
        "instantaneous" => Ok(TimeRegime::Instantaneous),
        "dephased" => Ok(TimeRegime::Dephased),
        "auto" => Ok(TimeRegime::Auto),
        other => Err(CliError::InvalidValue {
            key: "regime".into(),
            line: None,
            message: format!("`{other}` is not instantaneous, dephased, or auto"),
        }),
    }
}

fn scaling_cmd(a: ScalingArgs) -> Result<(), CliError> {
    let cfg = build_cfg(
        "scaling",
        &[
            ("mode", "size"),
            ("h", "0.8"),
            ("gamma", "0.5"),
            ("delta", "0.1"),
            ("kind", "transverse"),
            ("t", "5"),
            ("regime", "auto"),
            ("sizes", "501,1001,2001,4001"),
            ("n", "1001"),
            ("distances", "0.02:0.2:10"),
            ("out", "scaling.csv"),
        ],
        &a.config,
        &[
            ("mode", &a.mode),
            ("h", &a.h),
            ("gamma", &a.gamma),
            ("delta", &a.delta),
            ("kind", &a.kind),
            ("t", &a.t),
            ("regime", &a.regime),
            ("sizes", &a.sizes),
            ("n", &a.n),
            ("distances", &a.distances),
        ],
        &a.out,
        &[
            "mode", "h", "gamma", "delta", "kind", "t", "regime", "sizes", "n",
            "distances", "out",
        ],
    )?;
    let base = ModelParams::new(cfg.require_f64("h")?, cfg.require_f64("gamma")?)?;
    let kind = cfg.require_kind("kind")?;
    let q = QuenchSpec::new(kind, cfg.require_f64("delta")?)?;
    let sel = match kind {
        QuenchKind::Transverse => LambdaSel::Field,
        QuenchKind::Anisotropic => LambdaSel::Anisotropy,
    };
    let t = cfg.require_f64("t")?;
    let regime = require_regime(&cfg)?;
    let mut man = Manifest::new(cfg.command());
    man.push_config(&cfg);
    man.push("selector", sel.label());
    man.push_f64("fd_step", xy_scaling::FD_STEP);

    let art = match cfg.require("mode")? {
        "size" => {
            let sizes = cfg.require_list_usize("sizes")?;
            let run = ScalingRun::measure(base, q, t, &sizes, sel, regime)?;
            let mut table = Table::new(&["N", "derivative"]);
            for (i, &n) in run.sizes.iter().enumerate() {
                table.push(vec![Cell::Int(n as i64), Cell::Float(run.derivatives[i])]);
            }
            match fit_size_scaling(&run) {
                Ok(fit) => {
                    man.push_f64("fit_slope", fit.slope);
                    man.push_f64("fit_intercept", fit.intercept);
                    man.push_f64("fit_r_squared", fit.r_squared);
                    println!(
                        "derivative vs N: slope {} r^2 {}",
                        fmt_float(fit.slope),
                        fmt_float(fit.r_squared)
                    );
                }
                Err(e) => man.push("fit_unavailable", e),
            }
            Artifact {
                table,
                manifest: man,
            }
        }
        "approach" => {
            let n = cfg.require_usize("n")?;
            let distances = cfg.require_range("distances")?;
            let approach = CriticalApproach::measure(base, q, t, n, sel, regime, &distances)?;
            let mut table = Table::new(&["distance_to_critical", "scaled_derivative"]);
            for (i, &d) in approach.distances.iter().enumerate() {
                table.push_floats(&[d, approach.scaled[i]]);
            }
            match fit_law(&approach) {
                Ok(fit) => {
                    man.push("law", format!("{:?}", fit.law));
                    man.push_f64("law_slope", fit.slope);
                    man.push_f64("law_intercept", fit.intercept);
                    man.push_f64("law_r_squared", fit.r_squared);
                    man.push_f64("competing_r_squared", fit.competing_r_squared);
                    println!(
                        "approach law {:?}: r^2 {} vs competing {}",
                        fit.law,
                        fmt_float(fit.r_squared),
                        fmt_float(fit.competing_r_squared)
                    );
                }
                Err(e) => man.push("fit_unavailable", e),
            }
            Artifact {
                table,
                manifest: man,
            }
        }
        other => {
            return Err(CliError::InvalidValue {
                key: "mode".into(),
                line: None,
                message: format!("`{other}` is not `size` or `approach`"),
            })
        }
    };
    emit(&art, &cfg)?;
    Ok(())
}

fn figure_cmd(a: FigureArgs) -> Result<(), CliError> {
    let registry = FigureRegistry::standard();
    let recipe = registry.get(a.n).ok_or_else(|| {
        CliError::usage(format!(
            "figure number {} is outside 1..=9",
            a.n
        ))
    })?;
    let mut cfg = RunConfig::new(format!("figure {}", a.n));
    cfg.defaults(recipe.defaults());
    if let Some(path) = &a.config {
        cfg.load_file(path)?;
    }
    for pair in &a.set {
        cfg.set_pair(pair)?;
    }
    if let Some(out) = &a.out {
        cfg.set_flag("out", out.display().to_string());
    }
    cfg.validate_keys(recipe.allowed_keys())?;
    let art = recipe.build(&cfg)?;
    println!("figure {} ({}): {}", recipe.number(), recipe.slug(), recipe.summary());
    emit(&art, &cfg)?;
    Ok(())
}

/// Entry point shared by `main` and the process-level tests.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
