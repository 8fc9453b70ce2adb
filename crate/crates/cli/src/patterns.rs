//! Wave patterns built from a resolved config.

use outflow_core::waves::{
    admissibility_check, r3_connect, AdmissibilityReport, Condition, RarefactionMode, RarefactionWave,
    ScenarioKind, StationaryWave, Superposition, WavePattern,
};
use outflow_core::waves::admissibility::STRICT_OUTFLOW;
use outflow_core::FluidState;

use crate::config::{Config, Resolved, TargetKind};
use crate::CliError;

pub struct Built {
    pub resolved: Resolved,
    pub report: AdmissibilityReport,
    /// Pattern the solver relaxes towards (smoothed rarefaction parts).
    pub target: WavePattern,
}

impl Built {
    /// Same pattern with exact fans, used for sup-distances.
    pub fn comparison(&self) -> WavePattern {
        self.target.with_mode(RarefactionMode::ExactFan)
    }

    /// Strength entering the smallness factor report.
    pub fn strength(&self) -> Option<f64> {
        let r = &self.report;
        match (r.delta, r.delta_tilde, r.delta_bar) {
            (Some(d), _, _) => Some(d),
            (None, Some(a), Some(b)) => Some(a + b),
            (None, Some(a), None) => Some(a),
            _ => None,
        }
    }
}

/// Hypothesis report for the given target kind. A pure stationary target
/// only needs a strict outflow boundary.
pub fn admissibility(res: &Resolved, kind: TargetKind) -> AdmissibilityReport {
    match kind {
        TargetKind::Rarefaction => admissibility_check(&res.gas, &res.states, ScenarioKind::RarefactionOnly),
        TargetKind::Superposition => admissibility_check(&res.gas, &res.states, ScenarioKind::Superposition),
        TargetKind::Stationary => {
            let end = res.states.middle.unwrap_or(res.states.right);
            let u_minus = res.states.left.u_minus;
            AdmissibilityReport {
                scenario: ScenarioKind::Superposition,
                conditions: vec![Condition {
                    name: STRICT_OUTFLOW.into(),
                    holds: u_minus < 0.0,
                    detail: format!("u_- = {u_minus}"),
                }],
                delta: None,
                delta_tilde: Some((end.u() - u_minus).hypot(end.theta() - res.states.left.theta_minus)),
                delta_bar: None,
            }
        }
    }
}

/// Error naming every failed condition; the inflow case says so explicitly.
pub fn require(report: &AdmissibilityReport, u_minus: f64) -> Result<(), CliError> {
    let failed: Vec<String> = report.failed().map(|c| format!("{} ({})", c.name, c.detail)).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let mut msg = failed.join("; ");
    if u_minus > 0.0 {
        msg.push_str("; inflow boundaries (u_- > 0) are excluded, only outflow or impermeable wall");
    }
    Err(CliError::Admissibility(msg))
}

pub fn rarefaction(res: &Resolved, q: u32, mode: RarefactionMode) -> Result<RarefactionWave, CliError> {
    let right = res.states.right;
    let theta_minus = res.states.left.theta_minus;
    let (rho_minus, _) = r3_connect(&res.gas, &right, theta_minus)?;
    let left = FluidState::new(rho_minus, res.states.left.u_minus, theta_minus)?;
    Ok(RarefactionWave::new(res.gas, left, right, mode, q)?)
}

pub fn stationary(cfg: &Config, res: &Resolved) -> Result<StationaryWave, CliError> {
    let end = res.states.middle.unwrap_or(res.states.right);
    Ok(StationaryWave::solve(res.gas, res.states.left, end, &cfg.stationary_options())?)
}

pub fn superposition(cfg: &Config, res: &Resolved, mode: RarefactionMode) -> Result<Superposition, CliError> {
    let middle = res
        .states
        .middle
        .ok_or_else(|| CliError::Config("superposition needs rho_m, u_m, theta_m".into()))?;
    let st = stationary(cfg, res)?;
    let rw = RarefactionWave::new(res.gas, middle, res.states.right, mode, cfg.burgers.q)?;
    Ok(Superposition::new(st, rw)?)
}

/// Resolve the config, check the hypotheses and build the target pattern.
/// Failed hypotheses are an error unless `scenario.allow_inadmissible` is set.
pub fn build(cfg: &Config) -> Result<Built, CliError> {
    let resolved = cfg.resolve()?;
    let kind = cfg.scenario.kind;
    let report = admissibility(&resolved, kind);
    if !cfg.scenario.allow_inadmissible {
        require(&report, resolved.states.left.u_minus)?;
    }
    let target = match kind {
        TargetKind::Rarefaction => {
            WavePattern::Rarefaction(rarefaction(&resolved, cfg.burgers.q, RarefactionMode::Smoothed)?)
        }
        TargetKind::Stationary => WavePattern::Stationary(stationary(cfg, &resolved)?),
        TargetKind::Superposition => {
            WavePattern::Superposition(superposition(cfg, &resolved, RarefactionMode::Smoothed)?)
        }
    };
    Ok(Built {
        resolved,
        report,
        target,
    })
}
