//! One-command reproduction of the paper-style data sets. Each figure is a
//! [`FigureRecipe`] carrying its own defaults; recipes are registered by
//! number in a [`FigureRegistry`] and selected at run time, so an override
//! only ever touches the keys the recipe declares.

use rayon::prelude::*;
use xy_core::{ModelParams, MomentumGrid, QuenchSpec};
use xy_geodesic::{geodesic_shoot, DxInit, ShootConfig, SmallTimeField};
use xy_quench::{
    larget_limit, larget_series, loschmidt, modulation_profile, nielsen_quench, smalltime_series,
    time_series, SeriesLabel,
};
use xy_static::triangle_map;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::manifest::Manifest;
use crate::table::{Cell, Table};

/// A rendered data set: the CSV body and the manifest that makes every
/// number in it reproducible.
pub struct Artifact {
    pub table: Table,
    pub manifest: Manifest,
}

pub trait FigureRecipe: Sync {
    fn number(&self) -> u8;
    fn slug(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn allowed_keys(&self) -> &'static [&'static str];
    fn defaults(&self) -> &'static [(&'static str, &'static str)];
    fn build(&self, cfg: &RunConfig) -> Result<Artifact, CliError>;
}

pub(crate) fn or_nan<T, E>(r: Result<T, E>, pick: impl FnOnce(T) -> f64) -> f64 {
    match r {
        Ok(v) => pick(v),
        Err(_) => f64::NAN,
    }
}

pub(crate) fn push_grid(man: &mut Manifest, grid: &MomentumGrid) {
    match grid {
        MomentumGrid::ThermoLimit { abs_tol } => {
            man.push("grid_kind", "thermo");
            man.push_f64("grid_abs_tol", *abs_tol);
        }
        MomentumGrid::FiniteChain { n } => {
            man.push("grid_kind", "finite");
            man.push("grid_sites", n);
        }
    }
}

fn start_manifest(recipe: &dyn FigureRecipe, cfg: &RunConfig) -> Manifest {
    let mut man = Manifest::new(cfg.command());
    man.push("figure", recipe.number());
    man.push("slug", recipe.slug());
    man.push_config(cfg);
    man
}

fn count_nan(table: &Table, man: &mut Manifest) {
    let text = table.render();
    let nans = text.lines().flat_map(|l| l.split(',')).filter(|c| *c == "NaN").count();
    man.push("nan_cells", nans);
}

/// Triangle-inequality defect over the coupling plane, sign-corrected
/// targets, as a long-format heat-map grid.
struct DefectMap;

impl FigureRecipe for DefectMap {
    fn number(&self) -> u8 {
        1
    }

    fn slug(&self) -> &'static str {
        "defect-map"
    }

    fn summary(&self) -> &'static str {
        "triangle-defect heat map over the (h, gamma) plane"
    }

    fn allowed_keys(&self) -> &'static [&'static str] {
        &["h", "gamma", "delta", "order", "grid", "out"]
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        &[
            ("h", "0:2:41"),
            ("gamma", "0.05:1:20"),
            ("delta", "0.1"),
            ("order", "h-first"),
            ("grid", "thermo"),
            ("out", "figure1.csv"),
        ]
    }

    fn build(&self, cfg: &RunConfig) -> Result<Artifact, CliError> {
        defect_map(cfg, start_manifest(self, cfg))
    }
}

/// Shared body of figure 1 and the `triangle-map` subcommand.
pub(crate) fn defect_map(cfg: &RunConfig, mut man: Manifest) -> Result<Artifact, CliError> {
    let hs = cfg.require_range("h")?;
    let gammas = cfg.require_range("gamma")?;
    let delta = cfg.require_f64("delta")?;
    let order = cfg.require_order("order")?;
    let grid = cfg.require_grid("grid")?;
    let map = triangle_map(&hs, &gammas, delta, order, &grid)?;
    let mut table = Table::new(&["h", "gamma", "defect"]);
    for (ih, &h) in map.hs.iter().enumerate() {
        for (ig, &g) in map.gammas.iter().enumerate() {
            table.push_floats(&[h, g, map.value(ih, ig)]);
        }
    }
    push_grid(&mut man, &grid);
    if let Some((h, g, v)) = map.max_point() {
        man.push_f64("max_h", h);
        man.push_f64("max_gamma", g);
        man.push_f64("max_defect", v);
    }
    count_nan(&table, &mut man);
    Ok(Artifact {
        table,
        manifest: man,
    })
}

/// Complexity and echo against the swept coupling in the small-time
/// window: closed-form curves at each listed time, the mode-summed value
/// and the echo at the latest one.
struct SmallTimeCurves {
    number: u8,
    slug: &'static str,
    transverse: bool,
}

impl FigureRecipe for SmallTimeCurves {
    fn number(&self) -> u8 {
        self.number
    }

    fn slug(&self) -> &'static str {
        self.slug
    }

    fn summary(&self) -> &'static str {
        if self.transverse {
            "small-time complexity and echo against h, transverse quench"
        } else {
            "small-time complexity and echo against gamma, anisotropy quench"
        }
    }

    fn allowed_keys(&self) -> &'static [&'static str] {
        &["h", "gamma", "delta", "t", "grid", "out"]
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        if self.transverse {
            &[
                ("h", "-2:2:401"),
                ("gamma", "0.5"),
                ("delta", "0.1"),
                ("t", "0.5,1,1.5"),
                ("grid", "thermo"),
                ("out", "figure2.csv"),
            ]
        } else {
            &[
                ("h", "0.5"),
                ("gamma", "-2:2:401"),
                ("delta", "0.1"),
                ("t", "0.5,1,1.5"),
                ("grid", "thermo"),
                ("out", "figure3.csv"),
            ]
        }
    }

    fn build(&self, cfg: &RunConfig) -> Result<Artifact, CliError> {
        let (axis_key, fixed_key) = if self.transverse {
            ("h", "gamma")
        } else {
            ("gamma", "h")
        };
        let xs = cfg.require_range(axis_key)?;
        let fixed = cfg.require_f64(fixed_key)?;
        let delta = cfg.require_f64("delta")?;
        let times = cfg.require_list("t")?;
        if times.is_empty() {
            return Err(CliError::usage("at least one time is required"));
        }
        let grid = cfg.require_grid("grid")?;
        let t_last = *times.last().unwrap();
        let quench = if self.transverse {
            QuenchSpec::transverse(delta)?
        } else {
            QuenchSpec::anisotropic(delta)?
        };

        let mut header = vec![axis_key.to_owned()];
        for t in &times {
            header.push(format!("cn_series_t{t}"));
        }
        header.push(format!("cn_numeric_t{t_last}"));
        header.push(format!("neg_log_echo_t{t_last}"));

        let rows: Vec<Vec<f64>> = xs
            .par_iter()
            .map(|&x| {
                let p = if self.transverse {
                    ModelParams::new(x, fixed)
                } else {
                    ModelParams::new(fixed, x)
                };
                let mut row = vec![x];
                match p {
                    Ok(p) => {
                        // Raw expansion values: the figure keeps the closed
                        // curves across the range, divergences included.
                        for &t in &times {
                            row.push(or_nan(smalltime_series(p, quench, t), |s| s.value));
                        }
                        row.push(or_nan(nielsen_quench(p, quench, t_last, &grid), |s| s.value));
                        row.push(or_nan(loschmidt(p, quench, t_last, &grid), |s| -s.value));
                    }
                    Err(_) => row.extend(std::iter::repeat(f64::NAN).take(times.len() + 2)),
                }
                row
            })
            .collect();

        let mut table = Table::new(&header);
        for row in &rows {
            table.push_floats(row);
        }
        let mut man = start_manifest(self, cfg);
        push_grid(&mut man, &grid);
        count_nan(&table, &mut man);
        Ok(Artifact {
            table,
            manifest: man,
        })
    }
}

/// Early-window geodesics on the evolved-state metric: affine distance
/// against the coupling for several launch points, in long format.
struct EarlyGeodesics;

impl FigureRecipe for EarlyGeodesics {
    fn number(&self) -> u8 {
        4
    }

    fn slug(&self) -> &'static str {
        "early-geodesics"
    }

    fn summary(&self) -> &'static str {
        "affine distance tau against h for three early-window launches"
    }

    fn allowed_keys(&self) -> &'static [&'static str] {
        &["gamma", "t0", "dh0", "cases", "out"]
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        &[
            ("gamma", "0.5"),
            ("t0", "0.01"),
            ("dh0", "-0.1"),
            ("cases", "0.88:0.1,0.90:0.05,0.92:0.01"),
            ("out", "figure4.csv"),
        ]
    }

    fn build(&self, cfg: &RunConfig) -> Result<Artifact, CliError> {
        let gamma = cfg.require_f64("gamma")?;
        let t0 = cfg.require_f64("t0")?;
        let dh0 = cfg.require_f64("dh0")?;
        let raw = cfg.require("cases")?;
        let mut cases = Vec::new();
        for part in raw.split(',') {
            let pair = part.trim().split_once(':').and_then(|(a, b)| {
                Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?))
            });
            match pair {
                Some(c) => cases.push(c),
                None => {
                    return Err(CliError::InvalidValue {
                        key: "cases".into(),
                        line: None,
                        message: format!("`{part}` is not an `h0:delta` pair"),
                    })
                }
            }
        }

        let mut table = Table::new(&["case", "h0", "delta", "tau", "t", "h"]);
        let mut man = start_manifest(self, cfg);
        man.push("field", "small-time");
        for (i, &(h0, delta)) in cases.iter().enumerate() {
            let field = SmallTimeField::new(gamma, delta)?;
            let shoot = ShootConfig {
                dx_init: DxInit::Fixed(dh0),
                ..ShootConfig::new(t0, h0)
            };
            if i == 0 {
                man.push_f64("rel_tol", shoot.rel_tol);
                man.push_f64("abs_tol", shoot.abs_tol);
                man.push_f64("boundary_margin", shoot.boundary_margin);
                man.push("max_steps", shoot.max_steps);
            }
            let sol = geodesic_shoot(&field, &shoot)?;
            let case = i as i64 + 1;
            for s in &sol.samples {
                table.push(vec![
                    Cell::Int(case),
                    Cell::Float(h0),
                    Cell::Float(delta),
                    Cell::Float(s.tau),
                    Cell::Float(s.t),
                    Cell::Float(s.x),
                ]);
            }
            let prefix = format!("case{case}");
            man.push(&format!("{prefix}_terminal"), format!("{:?}", sol.terminal));
            man.push(&format!("{prefix}_samples"), sol.samples.len());
            man.push_f64(&format!("{prefix}_dt0_used"), sol.velocity_roots.0);
            man.push_f64(&format!("{prefix}_dt0_other"), sol.velocity_roots.1);
            if let Some(last) = sol.samples.last() {
                man.push_f64(&format!("{prefix}_tau_end"), last.tau);
                man.push_f64(&format!("{prefix}_h_end"), last.x);
            }
        }
        count_nan(&table, &mut man);
        Ok(Artifact {
            table,
            manifest: man,
        })
    }
}

/// Momentum-space structure at fixed couplings: the modulation envelope
/// and the per-mode complexity and echo at each listed time.
struct ModeStructure {
    number: u8,
    slug: &'static str,
}

impl FigureRecipe for ModeStructure {
    fn number(&self) -> u8 {
        self.number
    }

    fn slug(&self) -> &'static str {
        self.slug
    }

    fn summary(&self) -> &'static str {
        "per-mode modulation, complexity, and echo across the zone"
    }

    fn allowed_keys(&self) -> &'static [&'static str] {
        &["h", "gamma", "delta", "t", "grid", "out"]
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        match self.number {
            5 => &[
                ("h", "0.8"),
                ("gamma", "0.5"),
                ("delta", "0.1"),
                ("t", "20,200"),
                ("grid", "thermo"),
                ("out", "figure5.csv"),
            ],
            6 => &[
                ("h", "0.95"),
                ("gamma", "0.5"),
                ("delta", "0.1"),
                ("t", "200"),
                ("grid", "thermo"),
                ("out", "figure6.csv"),
            ],
            _ => &[
                ("h", "0.9"),
                ("gamma", "0.5"),
                ("delta", "0.1"),
                ("t", "200"),
                ("grid", "thermo"),
                ("out", "figure7.csv"),
            ],
        }
    }

    fn build(&self, cfg: &RunConfig) -> Result<Artifact, CliError> {
        let h = cfg.require_f64("h")?;
        let gamma = cfg.require_f64("gamma")?;
        let delta = cfg.require_f64("delta")?;
        let times = cfg.require_list("t")?;
        if times.is_empty() {
            return Err(CliError::usage("at least one time is required"));
        }
        let grid = cfg.require_grid("grid")?;
        let p = ModelParams::new(h, gamma)?;
        let q = QuenchSpec::transverse(delta)?;

        let mut header = vec!["k".to_owned(), "modulation".to_owned()];
        for t in &times {
            header.push(format!("cn_t{t}"));
            header.push(format!("neg_log_echo_t{t}"));
        }

        let profiles = times
            .iter()
            .map(|&t| modulation_profile(p, q, t, &grid))
            .collect::<Result<Vec<_>, _>>()?;
        let first = &profiles[0];
        let mut table = Table::new(&header);
        for (i, &k) in first.ks.iter().enumerate() {
            let mut row = vec![k, first.modulation[i]];
            for prof in &profiles {
                row.push(prof.cn[i]);
                row.push(-prof.le[i].ln());
            }
            table.push_floats(&row);
        }

        let mut man = start_manifest(self, cfg);
        push_grid(&mut man, &grid);
        man.push_f64("argmax_k", first.argmax_k);
        man.push_f64("max_modulation", first.max_modulation);
        count_nan(&table, &mut man);
        Ok(Artifact {
            table,
            manifest: man,
        })
    }
}

/// Complexity and echo time series for several couplings, with the
/// dephased long-run level of each alongside.
struct TimeSeriesPanel;

impl FigureRecipe for TimeSeriesPanel {
    fn number(&self) -> u8 {
        8
    }

    fn slug(&self) -> &'static str {
        "time-series-panel"
    }

    fn summary(&self) -> &'static str {
        "complexity and echo against time for several couplings"
    }

    fn allowed_keys(&self) -> &'static [&'static str] {
        &["h", "gamma", "delta", "t", "grid", "out"]
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        &[
            ("h", "0.8,0.9,1,1.1"),
            ("gamma", "0.5"),
            ("delta", "0.1"),
            ("t", "0:200:801"),
            ("grid", "thermo"),
            ("out", "figure8.csv"),
        ]
    }

    fn build(&self, cfg: &RunConfig) -> Result<Artifact, CliError> {
        let hs = cfg.require_list("h")?;
        let gamma = cfg.require_f64("gamma")?;
        let delta = cfg.require_f64("delta")?;
        let times = cfg.require_range("t")?;
        let grid = cfg.require_grid("grid")?;
        let q = QuenchSpec::transverse(delta)?;

        let mut header = vec!["t".to_owned()];
        for h in &hs {
            header.push(format!("cn_h{h}"));
            header.push(format!("neg_log_echo_h{h}"));
            header.push(format!("cn_infinity_h{h}"));
        }

        let mut man = start_manifest(self, cfg);
        push_grid(&mut man, &grid);

        let mut columns: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
        for &h in &hs {
            let p = ModelParams::new(h, gamma)?;
            let cn = time_series(p, q, &times, SeriesLabel::Nielsen, &grid)?;
            let echo = time_series(p, q, &times, SeriesLabel::NegLogEcho, &grid)?;
            let limit = larget_limit(p, q, &grid);
            match &limit {
                Ok(v) => man.push_f64(&format!("cn_infinity_h{h}"), *v),
                Err(e) => man.push(&format!("cn_infinity_h{h}"), format!("NaN ({e})")),
            }
            columns.push((cn.values, echo.values, limit.unwrap_or(f64::NAN)));
        }

        let mut table = Table::new(&header);
        for (i, &t) in times.iter().enumerate() {
            let mut row = vec![t];
            for (cn, echo, limit) in &columns {
                row.push(cn[i]);
                row.push(echo[i]);
                row.push(*limit);
            }
            table.push_floats(&row);
        }
        count_nan(&table, &mut man);
        Ok(Artifact {
            table,
            manifest: man,
        })
    }
}

/// Complexity and echo against the coupling deep in the dephased window,
/// with the closed long-run expansion alongside.
struct LargeTimePanel;

impl FigureRecipe for LargeTimePanel {
    fn number(&self) -> u8 {
        9
    }

    fn slug(&self) -> &'static str {
        "large-time-panel"
    }

    fn summary(&self) -> &'static str {
        "late-time complexity and echo against h with the closed expansion"
    }

    fn allowed_keys(&self) -> &'static [&'static str] {
        &["h", "gamma", "delta", "t", "grid", "out"]
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        &[
            ("h", "-2:2:401"),
            ("gamma", "0.5"),
            ("delta", "0.1"),
            ("t", "1000"),
            ("grid", "thermo"),
            ("out", "figure9.csv"),
        ]
    }

    fn build(&self, cfg: &RunConfig) -> Result<Artifact, CliError> {
        let hs = cfg.require_range("h")?;
        let gamma = cfg.require_f64("gamma")?;
        let delta = cfg.require_f64("delta")?;
        let t = cfg.require_f64("t")?;
        let grid = cfg.require_grid("grid")?;
        let q = QuenchSpec::transverse(delta)?;

        let rows: Vec<[f64; 4]> = hs
            .par_iter()
            .map(|&h| match ModelParams::new(h, gamma) {
                Ok(p) => [
                    h,
                    or_nan(nielsen_quench(p, q, t, &grid), |s| s.value),
                    or_nan(loschmidt(p, q, t, &grid), |s| -s.value),
                    // The expansion is drawn across the whole range so its
                    // breakdown near the transitions stays visible.
                    or_nan(larget_series(p, q), |s| s.value),
                ],
                Err(_) => [h, f64::NAN, f64::NAN, f64::NAN],
            })
            .collect();

        let mut table = Table::new(&["h", "cn_numeric", "neg_log_echo", "cn_limit_series"]);
        for row in &rows {
            table.push_floats(row);
        }
        let mut man = start_manifest(self, cfg);
        push_grid(&mut man, &grid);
        count_nan(&table, &mut man);
        Ok(Artifact {
            table,
            manifest: man,
        })
    }
}

/// All nine figure recipes, registered by number.
pub struct FigureRegistry {
    entries: Vec<Box<dyn FigureRecipe>>,
}

impl FigureRegistry {
    pub fn standard() -> Self {
        Self {
            entries: vec![
                Box::new(DefectMap),
                Box::new(SmallTimeCurves {
                    number: 2,
                    slug: "small-time-field-curves",
                    transverse: true,
                }),
                Box::new(SmallTimeCurves {
                    number: 3,
                    slug: "small-time-anisotropy-curves",
                    transverse: false,
                }),
                Box::new(EarlyGeodesics),
                Box::new(ModeStructure {
                    number: 5,
                    slug: "mode-structure-offcritical",
                }),
                Box::new(ModeStructure {
                    number: 6,
                    slug: "mode-structure-near-critical",
                }),
                Box::new(ModeStructure {
                    number: 7,
                    slug: "mode-structure-quench-to-critical",
                }),
                Box::new(TimeSeriesPanel),
                Box::new(LargeTimePanel),
            ],
        }
    }

    pub fn get(&self, n: u8) -> Option<&dyn FigureRecipe> {
        self.entries
            .iter()
            .find(|r| r.number() == n)
            .map(|r| r.as_ref())
    }

    pub fn numbers(&self) -> Vec<u8> {
        self.entries.iter().map(|r| r.number()).collect()
    }
}

/// Builds the data set behind figure `n` with the paper-pinned defaults,
/// applying the given key overrides first.
pub fn reproduce_figure(n: u8, overrides: &[(&str, &str)]) -> Result<Artifact, CliError> {
    let registry = FigureRegistry::standard();
    let recipe = registry
        .get(n)
        .ok_or_else(|| CliError::usage(format!("figure number {n} is outside 1..=9")))?;
    let mut cfg = RunConfig::new(format!("figure {n}"));
    cfg.defaults(recipe.defaults());
    for (k, v) in overrides {
        cfg.set_flag(k, *v);
    }
    cfg.validate_keys(recipe.allowed_keys())?;
    recipe.build(&cfg)
}
