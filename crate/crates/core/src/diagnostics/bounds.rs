//! Extrema of density and temperature over a run, and boundary traces.

use serde::{Deserialize, Serialize};

use crate::solver::SimField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldExtrema {
    pub t: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

impl FieldExtrema {
    pub fn of(field: &SimField) -> Self {
        let (rho_min, rho_max) = min_max(&field.rho);
        let (theta_min, theta_max) = min_max(&field.theta);
        Self {
            t: field.t,
            rho_min,
            rho_max,
            theta_min,
            theta_max,
        }
    }

    fn merge(&mut self, other: &Self) {
        self.t = other.t;
        self.rho_min = self.rho_min.min(other.rho_min);
        self.rho_max = self.rho_max.max(other.rho_max);
        self.theta_min = self.theta_min.min(other.theta_min);
        self.theta_max = self.theta_max.max(other.theta_max);
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Per-snapshot and whole-run extrema plus the boundary traces
/// `rho(t, 0)` and `Phi(rho_ref / rho)(t, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub snapshots: Vec<FieldExtrema>,
    /// Extrema over every time step, not only snapshots.
    pub global: Option<FieldExtrema>,
    /// `(t, rho(t, 0), Phi(rho_ref(t, 0) / rho(t, 0)))` at snapshot times.
    pub boundary_series: Vec<(f64, f64, f64)>,
    /// `int_0^t (rho Phi(rho_ref / rho))(s, 0) ds` accumulated over all steps.
    pub boundary_dissipation: f64,
    #[serde(skip)]
    last_boundary: Option<(f64, f64)>,
}

impl Default for BoundsReport {
    fn default() -> Self {
        Self::new()
    }
}

impl BoundsReport {
    pub fn new() -> Self {
        Self {
            snapshots: Vec::new(),
            global: None,
            boundary_series: Vec::new(),
            boundary_dissipation: 0.0,
            last_boundary: None,
        }
    }

    /// Fold one time level into the whole-run extrema and boundary integral.
    pub fn observe_step(&mut self, field: &SimField, rho_ref_at_boundary: f64) {
        let ext = FieldExtrema::of(field);
        match &mut self.global {
            Some(g) => g.merge(&ext),
            None => self.global = Some(ext),
        }
        let rho0 = field.rho[0];
        let z = rho_ref_at_boundary / rho0;
        let density = rho0 * (z - 1.0 - z.ln());
        if let Some((t_prev, d_prev)) = self.last_boundary {
            self.boundary_dissipation += 0.5 * (d_prev + density) * (field.t - t_prev);
        }
        self.last_boundary = Some((field.t, density));
    }

    pub fn record_snapshot(&mut self, field: &SimField, rho_ref_at_boundary: f64) {
        self.snapshots.push(FieldExtrema::of(field));
        let rho0 = field.rho[0];
        let z = rho_ref_at_boundary / rho0;
        self.boundary_series.push((field.t, rho0, z - 1.0 - z.ln()));
    }
}

/// Measured inputs of the smallness factor `m1^-50 m2^-50 N^50`: lower bounds
/// of density and temperature and the largest `H^1` perturbation norm. The
/// threshold it is compared with has no known value, so only the factor is
/// reported (in log10, it overflows otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiFactors {
    pub m1: f64,
    pub m2: f64,
    pub n_h1: f64,
    pub log10_xi: f64,
    /// `log10(Xi * strength)` when a wave strength is supplied.
    pub log10_xi_times_strength: Option<f64>,
}

impl XiFactors {
    pub fn new(m1: f64, m2: f64, n_h1: f64, strength: Option<f64>) -> Self {
        let log10_xi = 50.0 * (n_h1.log10() - m1.log10() - m2.log10());
        Self {
            m1,
            m2,
            n_h1,
            log10_xi,
            log10_xi_times_strength: strength.map(|s| log10_xi + s.log10()),
        }
    }
}
