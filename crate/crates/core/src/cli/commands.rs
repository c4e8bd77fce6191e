//! Subcommand bodies. Each returns the CSV text; the caller decides where
//! it goes.

use std::path::Path;

use rayon::prelude::*;

use super::config::{parse_angle, RunConfig};
use super::csv::{fmt_f64, quote, write_atomic, CsvDoc};
use super::presets::{self, Panel, Preset};
use super::CliError;
use crate::conditions::{maximal_times, theta_scan, unwrap_phases, Coverage, Method};
use crate::error::Error;
use crate::params::{InitialState, SystemParams};
use crate::trajectory::{evolve, swap_at, TimeGrid};
use crate::verify::{run_all, VerifyConfig};

pub const TOOL: &str = concat!("kerrswap ", env!("CARGO_PKG_VERSION"));

pub const EVOLVE_COLUMNS: [&str; 10] = [
    "gt",
    "concurrence",
    "P1",
    "P2",
    "Theta",
    "abs_A1",
    "abs_A2",
    "abs_A3",
    "abs_A4",
    "degenerate",
];

fn echo_params(doc: &mut CsvDoc, p: &SystemParams) {
    doc.comment(format!(
        "g = 1, delta/g = {}, chi/g = {}, kappa/g = {}, gamma/g = {}",
        fmt_f64(p.delta),
        fmt_f64(p.chi),
        fmt_f64(p.kappa),
        fmt_f64(p.gamma_a)
    ));
}

fn echo_run(doc: &mut CsvDoc, command: &str, cfg: &RunConfig) {
    doc.comment(format!("tool: {TOOL}"));
    doc.comment(format!("command: {command}"));
    echo_params(doc, &cfg.params);
    doc.comment(format!(
        "theta = {} ({}), phi = {} ({})",
        cfg.theta_expr,
        fmt_f64(cfg.init.theta),
        cfg.phi_expr,
        fmt_f64(cfg.init.phi)
    ));
}

pub fn evolve_csv(cfg: &RunConfig) -> Result<CsvDoc, CliError> {
    let mut doc = CsvDoc::new();
    echo_run(&mut doc, "evolve", cfg);
    doc.comment(format!(
        "t_max = {}, samples = {}",
        fmt_f64(cfg.t_max),
        cfg.samples
    ));
    write_evolution(&mut doc, &cfg.params, &cfg.init, cfg.t_max, cfg.samples)?;
    Ok(doc)
}

fn write_evolution(
    doc: &mut CsvDoc,
    params: &SystemParams,
    init: &InitialState,
    t_max: f64,
    samples: usize,
) -> Result<(), CliError> {
    let series = evolve(params, init, &TimeGrid::new(t_max, samples)?)?;
    doc.header(&EVOLVE_COLUMNS);
    for s in &series.samples {
        let o = &s.outcome;
        let mut row = vec![
            fmt_f64(s.t),
            fmt_f64(o.concurrence),
            fmt_f64(o.p1),
            fmt_f64(o.p2),
            fmt_f64(o.theta_phase),
        ];
        row.extend(s.amplitudes.iter().map(|a| fmt_f64(a.norm())));
        row.push(if o.degenerate { "1" } else { "0" }.into());
        doc.row(&row);
    }
    Ok(())
}

fn require_balanced(p: &SystemParams) -> Result<(), CliError> {
    if p.is_balanced() {
        Ok(())
    } else {
        Err(CliError::Precondition(format!(
            "theta-scan needs kappa == gamma (got kappa/g = {}, gamma/g = {})",
            p.kappa, p.gamma_a
        )))
    }
}

pub fn theta_scan_csv(cfg: &RunConfig, n: usize, unwrap: bool) -> Result<CsvDoc, CliError> {
    require_balanced(&cfg.params)?;
    let scan = theta_scan(&cfg.params, cfg.init.phi, n, cfg.samples)?;
    let mut doc = CsvDoc::new();
    doc.comment(format!("tool: {TOOL}"));
    doc.comment("command: theta-scan");
    echo_params(&mut doc, &cfg.params);
    doc.comment(format!(
        "phi = {} ({})",
        cfg.phi_expr,
        fmt_f64(cfg.init.phi)
    ));
    doc.comment(format!(
        "n = {n}, gt = {} ({}), theta samples = {}",
        fmt_f64(scan.time),
        scan.method.as_str(),
        cfg.samples
    ));
    doc.comment(if unwrap {
        "Theta unwrapped across theta"
    } else {
        "Theta principal value in (-pi, pi]"
    });
    let raw: Vec<Option<f64>> = scan.points.iter().map(|p| p.phase).collect();
    let phases = if unwrap { unwrap_phases(&raw) } else { raw };
    doc.header(&["theta", "Theta", "concurrence"]);
    for (p, phase) in scan.points.iter().zip(phases) {
        doc.row(&[
            fmt_f64(p.theta),
            fmt_f64(phase.unwrap_or(f64::NAN)),
            fmt_f64(p.concurrence),
        ]);
    }
    Ok(doc)
}

/// CSV plus an optional warning for stderr.
pub fn conditions_csv(cfg: &RunConfig, n: usize) -> Result<(CsvDoc, Option<String>), CliError> {
    let mut doc = CsvDoc::new();
    echo_run(&mut doc, "conditions", cfg);
    doc.comment(format!(
        "n_max = {n}, search window gt <= {}",
        fmt_f64(cfg.t_max)
    ));
    let report = match maximal_times(&cfg.params, &cfg.init, n, cfg.t_max) {
        Ok(r) => r,
        Err(Error::NoMaximaFound { t_max }) => {
            let msg = format!("no maximally entangled times found in [0, {t_max}]");
            doc.comment(format!("warning: {msg}"));
            doc.header(&["n", "T_n", "method", "residual", "concurrence_at_Tn"]);
            return Ok((doc, Some(msg)));
        }
        Err(e) => return Err(e.into()),
    };
    let mut warning = None;
    if report.method == Method::RootFind && report.coverage == Coverage::Discrete {
        let msg = if cfg.params.is_balanced() {
            "closed form inapplicable for (delta - 2 chi)^2 > 8 g^2; times found numerically"
        } else {
            "closed form needs kappa == gamma; times found numerically"
        };
        doc.comment(format!("warning: {msg}"));
        warning = Some(msg.to_string());
    }
    doc.header(&["n", "T_n", "method", "residual", "concurrence_at_Tn"]);
    if report.coverage == Coverage::AllPositiveTimes {
        doc.row(&[
            quote("all t > 0"),
            fmt_f64(f64::NAN),
            report.method.as_str().into(),
            fmt_f64(0.0),
            fmt_f64(1.0),
        ]);
        return Ok((doc, warning));
    }
    for (k, (&t, &r)) in report.times.iter().zip(&report.residuals).enumerate() {
        let c = swap_at(&cfg.params, &cfg.init, t).map_or(f64::NAN, |s| s.outcome.concurrence);
        doc.row(&[
            k.to_string(),
            fmt_f64(t),
            report.method.as_str().into(),
            fmt_f64(r),
            fmt_f64(c),
        ]);
    }
    Ok((doc, warning))
}

/// Report and whether every suite passed.
pub fn verify_csv(cfg: &VerifyConfig) -> (CsvDoc, bool) {
    let report = run_all(cfg);
    let mut doc = CsvDoc::new();
    doc.comment(format!("tool: {TOOL}"));
    doc.comment("command: verify");
    doc.comment(format!(
        "seed = {}, draws = {}, oracle tolerance = {}",
        cfg.seed,
        cfg.draws,
        fmt_f64(cfg.oracle_tol)
    ));
    doc.header(&[
        "suite",
        "passed",
        "cases",
        "max_deviation",
        "tolerance",
        "first_failure",
    ]);
    for s in &report.suites {
        doc.row(&[
            s.name.to_string(),
            s.passed.to_string(),
            s.cases.to_string(),
            fmt_f64(s.max_dev),
            fmt_f64(s.tol),
            s.first_failure.as_deref().map(quote).unwrap_or_default(),
        ]);
    }
    (doc, report.all_passed())
}

fn preset_doc(preset: &Preset, t_max: f64, samples: usize) -> Result<CsvDoc, CliError> {
    let mut doc = CsvDoc::new();
    doc.comment(format!("tool: {TOOL}"));
    doc.comment(format!("command: figures {}", preset.id));
    doc.comment(format!("preset {}", preset.describe()));
    match preset.panel {
        Panel::Evolve {
            delta,
            chi,
            kappa,
            gamma,
            theta,
            phi,
        } => {
            let params = SystemParams::scaled(delta, chi, kappa, gamma)?;
            let init = InitialState::new(
                parse_angle(theta).map_err(CliError::Usage)?,
                parse_angle(phi).map_err(CliError::Usage)?,
            );
            echo_params(&mut doc, &params);
            doc.comment(format!(
                "theta = {theta} ({}), phi = {phi} ({})",
                fmt_f64(init.theta),
                fmt_f64(init.phi)
            ));
            doc.comment(format!("t_max = {}, samples = {samples}", fmt_f64(t_max)));
            write_evolution(&mut doc, &params, &init, t_max, samples)?;
        }
        Panel::ThetaScan { phi, curves } => {
            let phi_v = parse_angle(phi).map_err(CliError::Usage)?;
            doc.comment(format!(
                "phi = {phi} ({}), n = 0, theta samples = {samples}",
                fmt_f64(phi_v)
            ));
            let mut rows = Vec::new();
            for (k, &(delta, chi)) in curves.iter().enumerate() {
                let params = SystemParams::scaled(delta, chi, 0.0, 0.0)?;
                let scan = theta_scan(&params, phi_v, 0, samples)?;
                doc.comment(format!(
                    "curve {k}: delta/g = {delta}, chi/g = {chi}, gt = {} ({})",
                    fmt_f64(scan.time),
                    scan.method.as_str()
                ));
                for p in scan.points {
                    rows.push(vec![
                        k.to_string(),
                        fmt_f64(delta),
                        fmt_f64(chi),
                        fmt_f64(p.theta),
                        fmt_f64(p.phase.unwrap_or(f64::NAN)),
                        fmt_f64(p.concurrence),
                    ]);
                }
            }
            doc.header(&["curve", "delta", "chi", "theta", "Theta", "concurrence"]);
            for r in rows {
                doc.row(&r);
            }
        }
    }
    Ok(doc)
}

/// Write the CSV of one preset (or of all with `"all"`) into `dir`;
/// returns the written paths in preset order.
pub fn figures(
    id: &str,
    dir: &Path,
    t_max: f64,
    samples: usize,
) -> Result<Vec<std::path::PathBuf>, CliError> {
    let selected: Vec<&Preset> = if id == "all" {
        presets::PRESETS.iter().collect()
    } else {
        vec![presets::find(id).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown figure id '{id}'; valid ids: {}, all",
                presets::ids().join(", ")
            ))
        })?]
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    selected
        .par_iter()
        .map(|p| {
            let doc = preset_doc(p, t_max, samples)?;
            let path = dir.join(format!("{}.csv", p.id));
            write_atomic(&path, doc.as_str()).map_err(|e| CliError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}
