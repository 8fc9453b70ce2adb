//! Admissibility of end states for the two asymptotic scenarios.

use serde::{Deserialize, Serialize};

use super::rarefaction::{r3_connect, r3_state, CURVE_TOL};
use crate::gas::{EndStates, FluidState, GasModel};

/// Which asymptotic state the data is meant to converge to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Single 3-rarefaction from the boundary state to the far field.
    RarefactionOnly,
    /// Stationary boundary layer followed by a 3-rarefaction.
    Superposition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub scenario: ScenarioKind,
    pub conditions: Vec<Condition>,
    /// Rarefaction strength `|(u_+ - u_-, theta_+ - theta_-)|` (rarefaction-only).
    pub delta: Option<f64>,
    /// Stationary strength `|(u_m - u_-, theta_m - theta_-)|` (superposition).
    pub delta_tilde: Option<f64>,
    /// Middle-to-right strength `|(u_m - u_+, theta_m - theta_+)|` (superposition).
    pub delta_bar: Option<f64>,
}

impl AdmissibilityReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.holds)
    }
}

pub const OUTFLOW: &str = "u_− ≤ 0";
pub const STRICT_OUTFLOW: &str = "u_− < 0";
pub const SONIC_BOUNDARY: &str = "u_−+√(Rγθ_−)≥0";
pub const ON_CURVE: &str = "(ρ_+,u_+,θ_+) ∈ R_3(ρ_−,u_−,θ_−)";
pub const ON_CURVE_MIDDLE: &str = "(ρ_+,u_+,θ_+) ∈ R_3(ρ_m,u_m,θ_m)";
pub const SUBSONIC_MIDDLE: &str = "√(Rγθ_m)≥ −u_m>0";

fn on_curve_from(gas: &GasModel, left: &FluidState, right: &FluidState) -> (bool, String) {
    match r3_state(gas, left, right.theta()) {
        Ok(expect) => {
            let du = (expect.u() - right.u()).abs();
            let drho = (expect.rho() - right.rho()).abs() / right.rho();
            let ok = du <= CURVE_TOL.max(1e-8) * right.u().abs().max(1.0) && drho <= 1e-8;
            (ok, format!("curve gives rho={}, u={}", expect.rho(), expect.u()))
        }
        Err(e) => (false, e.to_string()),
    }
}

/// Check the stability hypotheses for the given end states.
/// Never fails: violations are reported as conditions that do not hold.
pub fn admissibility_check(
    gas: &GasModel,
    states: &EndStates,
    scenario: ScenarioKind,
) -> AdmissibilityReport {
    let u_minus = states.left.u_minus;
    let theta_minus = states.left.theta_minus;
    let right = states.right;
    let mut conditions = Vec::new();
    match scenario {
        ScenarioKind::RarefactionOnly => {
            conditions.push(Condition {
                name: OUTFLOW.into(),
                holds: u_minus <= 0.0,
                detail: format!("u_- = {u_minus}"),
            });
            let lam = u_minus + gas.sound_speed(theta_minus);
            conditions.push(Condition {
                name: SONIC_BOUNDARY.into(),
                holds: lam >= 0.0,
                detail: format!("u_- + sqrt(R gamma theta_-) = {lam}"),
            });
            let (holds, detail) = match r3_connect(gas, &right, theta_minus) {
                Ok((_, u_curve)) => (
                    (u_curve - u_minus).abs() <= 1e-8 * u_minus.abs().max(1.0),
                    format!("curve gives u_- = {u_curve}"),
                ),
                Err(e) => (false, e.to_string()),
            };
            conditions.push(Condition {
                name: ON_CURVE.into(),
                holds,
                detail,
            });
            AdmissibilityReport {
                scenario,
                conditions,
                delta: Some((right.u() - u_minus).hypot(right.theta() - theta_minus)),
                delta_tilde: None,
                delta_bar: None,
            }
        }
        ScenarioKind::Superposition => {
            conditions.push(Condition {
                name: STRICT_OUTFLOW.into(),
                holds: u_minus < 0.0,
                detail: format!("u_- = {u_minus}"),
            });
            let Some(middle) = states.middle else {
                conditions.push(Condition {
                    name: "middle state present".into(),
                    holds: false,
                    detail: "superposition needs (rho_m, u_m, theta_m)".into(),
                });
                return AdmissibilityReport {
                    scenario,
                    conditions,
                    delta: None,
                    delta_tilde: None,
                    delta_bar: None,
                };
            };
            let c_m = gas.sound_speed(middle.theta());
            conditions.push(Condition {
                name: SUBSONIC_MIDDLE.into(),
                holds: c_m >= -middle.u() && -middle.u() > 0.0,
                detail: format!("c_m = {c_m}, -u_m = {}", -middle.u()),
            });
            let (holds, detail) = on_curve_from(gas, &middle, &right);
            conditions.push(Condition {
                name: ON_CURVE_MIDDLE.into(),
                holds,
                detail,
            });
            AdmissibilityReport {
                scenario,
                conditions,
                delta: None,
                delta_tilde: Some((middle.u() - u_minus).hypot(middle.theta() - theta_minus)),
                delta_bar: Some((middle.u() - right.u()).hypot(middle.theta() - right.theta())),
            }
        }
    }
}
