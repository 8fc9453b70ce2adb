//! The three subcommands. Each returns `Ok(())` for exit status 0.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use serde::Serialize;

use outflow_core::diagnostics::{RunMonitor, RunSummary};
use outflow_core::io::{format_float, pattern_table, snapshot_table, stationary_table, Table};
use outflow_core::solver::{run_with, Scenario};
use outflow_core::waves::{AdmissibilityReport, RarefactionMode, WavePattern};
use outflow_core::FluidState;

use crate::config::{Config, LoadedConfig, Resolved, Suite, TargetKind};
use crate::patterns::{self, Built};
use crate::suites::{self, Check};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructKind {
    Rarefaction,
    Smoothed,
    Stationary,
    Superposition,
}

impl ConstructKind {
    fn name(self) -> &'static str {
        match self {
            Self::Rarefaction => "rarefaction",
            Self::Smoothed => "smoothed",
            Self::Stationary => "stationary",
            Self::Superposition => "superposition",
        }
    }
}

/// `--out`, then `$OUTPUT_DIR`, then the fallback.
pub fn output_location(out: Option<&Path>, fallback: &str) -> PathBuf {
    match out {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os("OUTPUT_DIR")
            .map(|d| PathBuf::from(d).join(fallback))
            .unwrap_or_else(|| PathBuf::from(fallback)),
    }
}

fn write_table(table: &Table, path: &Path) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    table.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

fn state_meta(table: Table, prefix: &str, s: &FluidState) -> Table {
    table
        .with_meta(&format!("rho_{prefix}"), format_float(s.rho()))
        .with_meta(&format!("u_{prefix}"), format_float(s.u()))
        .with_meta(&format!("theta_{prefix}"), format_float(s.theta()))
}

/// Parameter record of the config: gas constants and resolved end states.
fn parameter_meta(mut table: Table, cfg: &Config, res: &Resolved) -> Table {
    let g = &res.gas;
    table = table
        .with_meta("R", format_float(g.r()))
        .with_meta("gamma", format_float(g.gamma()))
        .with_meta("mu", format_float(g.mu()))
        .with_meta("kappa", format_float(g.kappa()))
        .with_meta("q", cfg.burgers.q)
        .with_meta("u_minus", format_float(res.states.left.u_minus))
        .with_meta("theta_minus", format_float(res.states.left.theta_minus));
    if let Some(m) = res.states.middle {
        table = state_meta(table, "m", &m);
    }
    state_meta(table, "plus", &res.states.right)
}

fn with_header(table: Table, hash: &str, kind: &str) -> Table {
    let mut t = Table::new(&[]).with_meta("config_hash", hash).with_meta("kind", kind);
    t.meta.extend(table.meta);
    t.columns = table.columns;
    t.rows = table.rows;
    t
}

/// Sample a wave pattern and write it in the tabular format. Rarefaction
/// kinds use the simulation time axis, so the fan is centered at `t = -1`.
pub fn construct(
    loaded: &LoadedConfig,
    kind: ConstructKind,
    t: f64,
    out: Option<&Path>,
    quiet: bool,
) -> Result<(), CliError> {
    let cfg = &loaded.config;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CliError::Config(format!("--t must be finite and >= 0, got {t}")));
    }
    let res = cfg.resolve()?;
    let grid = cfg.grid()?;
    let body = match kind {
        ConstructKind::Rarefaction | ConstructKind::Smoothed => {
            let report = patterns::admissibility(&res, TargetKind::Rarefaction);
            let on_curve = report
                .conditions
                .iter()
                .filter(|c| c.name == outflow_core::waves::admissibility::ON_CURVE && !c.holds);
            if let Some(c) = on_curve.into_iter().next() {
                return Err(CliError::Admissibility(format!("{} ({})", c.name, c.detail)));
            }
            let mode = if kind == ConstructKind::Rarefaction {
                RarefactionMode::ExactFan
            } else {
                RarefactionMode::Smoothed
            };
            let w = patterns::rarefaction(&res, cfg.burgers.q, mode)?;
            pattern_table(&WavePattern::Rarefaction(w), &grid, t)?
        }
        ConstructKind::Stationary => stationary_table(&patterns::stationary(cfg, &res)?),
        ConstructKind::Superposition => {
            let sp = patterns::superposition(cfg, &res, RarefactionMode::Smoothed)?;
            pattern_table(&WavePattern::Superposition(sp), &grid, t)?
        }
    };
    let table = with_header(parameter_meta(body, cfg, &res), &loaded.hash, kind.name());
    match out.map(Path::to_path_buf).or_else(|| {
        std::env::var_os("OUTPUT_DIR").map(|d| PathBuf::from(d).join(format!("{}.csv", kind.name())))
    }) {
        Some(path) => {
            write_table(&table, &path)?;
            if !quiet {
                eprintln!("wrote {} rows to {}", table.rows.len(), path.display());
            }
        }
        None => table.write_to(io::stdout().lock())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    config_hash: &'a str,
    kind: TargetKind,
    admissibility: &'a AdmissibilityReport,
    summary: &'a RunSummary,
}

/// Run the configured scenario; writes `snapshot_NNN.csv` files and `summary.json`.
pub fn simulate(loaded: &LoadedConfig, out: Option<&Path>, quiet: bool) -> Result<RunSummary, CliError> {
    let cfg = &loaded.config;
    let built: Built = patterns::build(cfg)?;
    if !built.report.all_hold() && !quiet {
        for c in built.report.failed() {
            eprintln!("warning: hypothesis {} fails ({}); running anyway", c.name, c.detail);
        }
    }
    let scenario = Scenario::new(
        cfg.grid()?,
        built.target.clone(),
        cfg.perturbation(),
        cfg.time_control(),
        cfg.output_times()?,
    )?;
    let dir = output_location(out, "out");
    fs::create_dir_all(&dir)?;

    let mut monitor = RunMonitor::new(&scenario, built.comparison(), built.strength());
    let trajectory = run_with(&scenario, |r, f| {
        if monitor.observe(r, f) {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    })?;
    let mut summary = monitor.finish(&trajectory)?;
    summary.config_hash = Some(loaded.hash.clone());

    for (k, field) in trajectory.snapshots.iter().enumerate() {
        let table = snapshot_table(field, scenario.grid(), scenario.target())?;
        let table = with_header(parameter_meta(table, cfg, &built.resolved), &loaded.hash, "snapshot");
        write_table(&table, &dir.join(format!("snapshot_{k:03}.csv")))?;
    }
    let report = SimulateReport {
        config_hash: &loaded.hash,
        kind: cfg.scenario.kind,
        admissibility: &built.report,
        summary: &summary,
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Runtime(e.to_string()))?;
    fs::write(dir.join("summary.json"), json + "\n")?;

    if !quiet {
        println!("steps = {}, t = {}, reached_end = {}", summary.steps, summary.t_final, summary.reached_end);
        for r in &summary.records {
            println!(
                "t = {:>10.4}  sup_distance = {:.6e}  energy = {:.6e}  h1 = {:.6e}",
                r.t, r.sup_distance, r.energy, r.norms.h1_total
            );
        }
        println!("outputs in {}", dir.display());
    }
    if !summary.reached_end {
        return Err(CliError::Runtime(format!(
            "stopped at t = {} after {} steps before t_end",
            summary.t_final, summary.steps
        )));
    }
    Ok(summary)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    config_hash: &'a str,
    checks: &'a [Check],
}

/// Run suites and print one line per check. Fails with exit status 3 when
/// any check fails.
pub fn verify(
    loaded: &LoadedConfig,
    suite: Option<Suite>,
    out: Option<&Path>,
    quiet: bool,
) -> Result<Vec<Check>, CliError> {
    let cfg = &loaded.config;
    let list: Vec<Suite> = match suite {
        Some(s) => vec![s],
        None => cfg.verify.suites.clone(),
    };
    let mut checks = Vec::new();
    for s in list {
        let found = suites::run(s, cfg)?;
        if !quiet {
            for c in &found {
                println!("{c}");
            }
        }
        checks.extend(found);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if quiet {
        for c in checks.iter().filter(|c| !c.pass) {
            println!("{c}");
        }
    }
    if let Some(path) = out {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let report = VerifyReport {
            config_hash: &loaded.hash,
            checks: &checks,
        };
        let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Runtime(e.to_string()))?;
        fs::write(path, json + "\n")?;
    }
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: checks.len(),
        });
    }
    Ok(checks)
}
