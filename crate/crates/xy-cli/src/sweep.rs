//! Cartesian parameter sweep with a resumable, append-only output file.
//!
//! Rows are computed in parallel chunks but written by a single writer in
//! input order, so a finished file is byte-identical no matter the thread
//! count or how many times the run was interrupted and resumed. A sidecar
//! progress file tracks the configuration fingerprint and the number of
//! completed rows; rerunning with the same configuration continues after
//! the last flushed chunk.

use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use xy_core::{CoreError, ModelParams, QuenchKind, QuenchSpec};
use xy_quench::{loschmidt, nielsen_quench, QuenchError};

use crate::commands::{build_cfg, manifest_path, SweepArgs};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::figures::push_grid;
use crate::manifest::Manifest;
use crate::table::{fmt_float, write_atomic};

const CHUNK_ROWS: usize = 256;
const CRITICAL_TOL: f64 = 1e-9;
const HEADER: &str = "h,gamma,delta,t,cn,neg_log_echo,status";

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Critical,
    Failed,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Critical => "critical",
            Status::Failed => "failed",
        }
    }
}

struct Point {
    h: f64,
    gamma: f64,
    delta: f64,
    t: f64,
}

struct Row {
    point: Point,
    cn: f64,
    neg_log_echo: f64,
    status: Status,
    note: Option<String>,
}

fn is_gapless(e: &QuenchError) -> bool {
    matches!(e, QuenchError::Core(CoreError::GaplessMode { .. }))
}

fn evaluate(point: Point, kind: QuenchKind, grid: &xy_core::MomentumGrid) -> Row {
    let prepared = ModelParams::new(point.h, point.gamma)
        .map_err(QuenchError::from)
        .and_then(|p| Ok((p, QuenchSpec::new(kind, point.delta)?)));
    let (p, q) = match prepared {
        Ok(pair) => pair,
        Err(e) => {
            return Row {
                point,
                cn: f64::NAN,
                neg_log_echo: f64::NAN,
                status: Status::Failed,
                note: Some(e.to_string()),
            }
        }
    };
    let mut status = if p.on_critical_line(CRITICAL_TOL) || q.shifted(p).on_critical_line(CRITICAL_TOL)
    {
        Status::Critical
    } else {
        Status::Ok
    };
    let mut note = None;
    let mut grab = |r: Result<xy_quench::Sampled, QuenchError>| match r {
        Ok(s) => s.value,
        Err(e) => {
            if is_gapless(&e) {
                status = Status::Critical;
            } else {
                status = Status::Failed;
                note = Some(e.to_string());
            }
            f64::NAN
        }
    };
    let cn = grab(nielsen_quench(p, q, point.t, grid));
    let log_echo = grab(loschmidt(p, q, point.t, grid));
    Row {
        point,
        cn,
        neg_log_echo: -log_echo,
        status,
        note,
    }
}

fn render_row(row: &Row) -> String {
    format!(
        "{},{},{},{},{},{},{}\n",
        fmt_float(row.point.h),
        fmt_float(row.point.gamma),
        fmt_float(row.point.delta),
        fmt_float(row.point.t),
        fmt_float(row.cn),
        fmt_float(row.neg_log_echo),
        row.status.as_str()
    )
}

fn progress_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".progress");
    PathBuf::from(s)
}

struct Progress {
    fingerprint: u64,
    rows_total: usize,
    rows_done: usize,
}

impl Progress {
    fn render(&self) -> String {
        format!(
            "config_fingerprint={:016x}\nrows_total={}\nrows_done={}\n",
            self.fingerprint, self.rows_total, self.rows_done
        )
    }

    fn parse(text: &str) -> Option<Progress> {
        let mut fingerprint = None;
        let mut rows_total = None;
        let mut rows_done = None;
        for line in text.lines() {
            let (key, value) = line.split_once('=')?;
            match key {
                "config_fingerprint" => fingerprint = u64::from_str_radix(value, 16).ok(),
                "rows_total" => rows_total = value.parse().ok(),
                "rows_done" => rows_done = value.parse().ok(),
                _ => return None,
            }
        }
        Some(Progress {
            fingerprint: fingerprint?,
            rows_total: rows_total?,
            rows_done: rows_done?,
        })
    }

    fn save(&self, path: &Path) -> Result<(), CliError> {
        write_atomic(path, &self.render())
    }
}

/// Fingerprint of everything that determines the sweep's output, so a
/// stale progress file from a different configuration is rejected rather
/// than silently continued.
fn config_fingerprint(cfg: &RunConfig) -> u64 {
    let mut man = Manifest::new(cfg.command());
    man.push_config(cfg);
    man.fingerprint()
}

/// How many completed rows of the existing output can be kept. Truncates
/// the file to the header plus that many rows when anything after them
/// must be dropped.
fn prepare_resume(out: &Path, rows_done: usize) -> Result<usize, CliError> {
    let text = match std::fs::read_to_string(out) {
        Ok(text) => text,
        Err(_) => return Ok(0),
    };
    let mut lines: Vec<&str> = text.lines().collect();
    if lines.first() != Some(&HEADER) {
        return Ok(0);
    }
    let keep = rows_done.min(lines.len().saturating_sub(1));
    lines.truncate(1 + keep);
    let mut kept = lines.join("\n");
    kept.push('\n');
    std::fs::write(out, kept).map_err(|e| CliError::io(out, e))?;
    Ok(keep)
}

pub(crate) fn sweep_cmd(a: SweepArgs) -> Result<(), CliError> {
    let cfg = build_cfg(
        "sweep",
        &[
            ("h", "0.5"),
            ("gamma", "0.5"),
            ("delta", "0.1"),
            ("t", "1"),
            ("kind", "transverse"),
            ("grid", "thermo"),
            ("out", "sweep.csv"),
        ],
        &a.config,
        &[
            ("h", &a.h),
            ("gamma", &a.gamma),
            ("delta", &a.delta),
            ("t", &a.t),
            ("kind", &a.kind),
            ("grid", &a.grid),
        ],
        &a.out,
        &["h", "gamma", "delta", "t", "kind", "grid", "out"],
    )?;
    let hs = cfg.require_values("h")?;
    let gammas = cfg.require_values("gamma")?;
    let deltas = cfg.require_values("delta")?;
    let ts = cfg.require_values("t")?;
    let kind = cfg.require_kind("kind")?;
    let grid = cfg.require_grid("grid")?;
    let out = PathBuf::from(cfg.require("out")?);
    let prog_path = progress_path(&out);

    let rows_total = hs.len() * gammas.len() * deltas.len() * ts.len();
    let fingerprint = config_fingerprint(&cfg);

    let mut rows_done = 0;
    if let Ok(text) = std::fs::read_to_string(&prog_path) {
        let prev = Progress::parse(&text).ok_or_else(|| {
            CliError::usage(format!(
                "progress file {} is unreadable; delete it to start over",
                prog_path.display()
            ))
        })?;
        if prev.fingerprint != fingerprint || prev.rows_total != rows_total {
            return Err(CliError::usage(format!(
                "progress file {} belongs to a different sweep configuration; \
                 delete it or write to a different output path",
                prog_path.display()
            )));
        }
        rows_done = prepare_resume(&out, prev.rows_done)?;
        if rows_done == rows_total {
            println!(
                "sweep already complete: {} rows in {}",
                rows_total,
                out.display()
            );
            return Ok(());
        }
        if rows_done > 0 {
            println!("resuming after {rows_done} of {rows_total} rows");
        }
    }

    let mut file = if rows_done > 0 {
        OpenOptions::new()
            .append(true)
            .open(&out)
            .map_err(|e| CliError::io(&out, e))?
    } else {
        let mut f = std::fs::File::create(&out).map_err(|e| CliError::io(&out, e))?;
        f.write_all(HEADER.as_bytes())
            .and_then(|_| f.write_all(b"\n"))
            .map_err(|e| CliError::io(&out, e))?;
        f
    };
    Progress {
        fingerprint,
        rows_total,
        rows_done,
    }
    .save(&prog_path)?;

    let point_at = |index: usize| {
        let ti = index % ts.len();
        let rest = index / ts.len();
        let di = rest % deltas.len();
        let rest = rest / deltas.len();
        let gi = rest % gammas.len();
        let hi = rest / gammas.len();
        Point {
            h: hs[hi],
            gamma: gammas[gi],
            delta: deltas[di],
            t: ts[ti],
        }
    };

    let mut cursor = rows_done;
    while cursor < rows_total {
        let end = (cursor + CHUNK_ROWS).min(rows_total);
        let rows: Vec<Row> = (cursor..end)
            .into_par_iter()
            .map(|i| evaluate(point_at(i), kind, &grid))
            .collect();
        let mut block = String::new();
        for (offset, row) in rows.iter().enumerate() {
            if let Some(note) = &row.note {
                eprintln!(
                    "sweep: row {} (h={}, gamma={}, delta={}, t={}): {}",
                    cursor + offset,
                    row.point.h,
                    row.point.gamma,
                    row.point.delta,
                    row.point.t,
                    note
                );
            }
            block.push_str(&render_row(row));
        }
        file.write_all(block.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| CliError::io(&out, e))?;
        cursor = end;
        Progress {
            fingerprint,
            rows_total,
            rows_done: cursor,
        }
        .save(&prog_path)?;
    }
    drop(file);

    let finished = std::fs::read_to_string(&out).map_err(|e| CliError::io(&out, e))?;
    let mut counts = [0usize; 3];
    for line in finished.lines().skip(1) {
        match line.rsplit(',').next() {
            Some("ok") => counts[0] += 1,
            Some("critical") => counts[1] += 1,
            _ => counts[2] += 1,
        }
    }

    let mut man = Manifest::new(cfg.command());
    man.push_config(&cfg);
    push_grid(&mut man, &grid);
    man.push("rows", rows_total);
    man.push("resumed_after", rows_done);
    man.push("rows_ok", counts[0]);
    man.push("rows_critical", counts[1]);
    man.push("rows_failed", counts[2]);
    man.push("config_fingerprint", format!("{fingerprint:016x}"));
    let man_path = manifest_path(&out);
    man.write(&man_path)?;
    println!(
        "wrote {} rows to {} (manifest {})",
        rows_total,
        out.display(),
        man_path.display()
    );
    Ok(())
}
