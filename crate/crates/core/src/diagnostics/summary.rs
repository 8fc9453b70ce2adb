//! Diagnostics collected while a scenario runs, and the per-run summary.

use serde::{Deserialize, Serialize};

use super::bounds::{BoundsReport, XiFactors};
use super::norms::{perturbation_norms, sup_distance, tail_sentinel, ComponentNorms, PerturbationField};
use super::{energy_integral, DiagnosticsError};
use crate::solver::{Scenario, SimField, StepReport, Trajectory};
use crate::waves::WavePattern;

/// Diagnostics at one snapshot time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub t: f64,
    /// Against the comparison pattern (exact fan for rarefaction parts).
    pub sup_distance: f64,
    /// `int rho E dx` against the scenario's target pattern.
    pub energy: f64,
    /// Perturbation from the target pattern.
    pub norms: ComponentNorms,
    pub tail_sentinel: f64,
    /// `|target(t, L) - far field|`.
    pub truncation_sentinel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub steps: usize,
    pub reached_end: bool,
    pub t_final: f64,
    pub h: f64,
    pub records: Vec<SnapshotRecord>,
    pub bounds: BoundsReport,
    pub xi: Option<XiFactors>,
    /// `max_t energy(t) / energy(0)`.
    pub energy_ratio_max: Option<f64>,
}

impl RunSummary {
    pub fn record_at(&self, t: f64) -> Option<&SnapshotRecord> {
        self.records.iter().find(|r| (r.t - t).abs() <= 1e-9 * t.max(1.0))
    }
}

/// Observer that accumulates diagnostics while a scenario runs.
pub struct RunMonitor<'a> {
    scenario: &'a Scenario,
    comparison: WavePattern,
    strength: Option<f64>,
    bounds: BoundsReport,
    records: Vec<SnapshotRecord>,
    error: Option<DiagnosticsError>,
}

impl<'a> RunMonitor<'a> {
    /// `comparison` is the pattern sup-distances are measured against;
    /// `strength` feeds the smallness factor report.
    pub fn new(scenario: &'a Scenario, comparison: WavePattern, strength: Option<f64>) -> Self {
        Self {
            scenario,
            comparison,
            strength,
            bounds: BoundsReport::new(),
            records: Vec::new(),
            error: None,
        }
    }

    /// Call from the solver observer; returns false once an error was stored.
    pub fn observe(&mut self, report: &StepReport, field: &SimField) -> bool {
        if self.error.is_some() {
            return false;
        }
        match self.try_observe(report, field) {
            Ok(()) => true,
            Err(e) => {
                self.error = Some(e);
                false
            }
        }
    }

    fn try_observe(&mut self, report: &StepReport, field: &SimField) -> Result<(), DiagnosticsError> {
        let sc = self.scenario;
        let rho_ref0 = sc.target().eval(field.t, 0.0)?.rho();
        self.bounds.observe_step(field, rho_ref0);
        if report.snapshot {
            self.bounds.record_snapshot(field, rho_ref0);
            let pf = PerturbationField::new(field, sc.grid(), sc.target())?;
            self.records.push(SnapshotRecord {
                t: field.t,
                sup_distance: sup_distance(field, sc.grid(), &self.comparison)?,
                energy: energy_integral(sc.gas(), sc.grid(), field, sc.target())?,
                norms: perturbation_norms(&pf, sc.grid())?,
                tail_sentinel: tail_sentinel(&pf),
                truncation_sentinel: sc.truncation_sentinel(field.t)?,
            });
        }
        Ok(())
    }

    pub fn finish(self, trajectory: &Trajectory) -> Result<RunSummary, DiagnosticsError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let xi = self.bounds.global.map(|g| {
            let n = self
                .records
                .iter()
                .map(|r| r.norms.h1_total)
                .fold(0.0, f64::max);
            XiFactors::new(g.rho_min, g.theta_min, n, self.strength)
        });
        let e0 = self.records.first().map(|r| r.energy).unwrap_or(0.0);
        let energy_ratio_max = (e0 > 0.0).then(|| {
            self.records
                .iter()
                .map(|r| r.energy / e0)
                .fold(0.0, f64::max)
        });
        Ok(RunSummary {
            config_hash: None,
            steps: trajectory.steps,
            reached_end: trajectory.reached_end,
            t_final: trajectory.final_field.t,
            h: self.scenario.grid().h(),
            records: self.records,
            bounds: self.bounds,
            xi,
            energy_ratio_max,
        })
    }
}
