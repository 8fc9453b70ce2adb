//! Experiment configuration.
//!
//! A config is a TOML document with the sections below. Every key is
//! optional unless marked otherwise; unknown sections or keys are errors.
//!
//! ```toml
//! [gas]            # R, gamma, mu, kappa (defaults 1, 1.4, 1, 1)
//! [endstates]      # rho_plus, theta_plus (required), u_plus,
//!                  # u_minus, theta_minus, rho_m, u_m, theta_m
//! [burgers]        # q (integer >= 16), w_minus, w_plus
//! [grid]           # L, N
//! [time]           # t_end, cfl, max_steps, snapshot_every, snapshots
//! [perturbation]   # shape, amplitude = [rho, u, theta], center, width
//! [stationary]     # tol, rtol, atol, x_max, delta0, trust_factor, spacing, shoot
//! [scenario]       # kind = rarefaction | stationary | superposition,
//!                  # allow_inadmissible
//! [verify]         # suites, slope_tol, min_order, ... (see VerifySection)
//! ```
//!
//! Endstate rules:
//! * `u_minus` may be omitted for a rarefaction; it is then read off the
//!   3-rarefaction curve through the right state. Conversely `u_plus` may be
//!   omitted when `u_minus` and `theta_minus` are given.
//! * with a middle state, `rho_plus` and `u_plus` may be omitted and are
//!   then taken from the curve through the middle state at `theta_plus`.
//! * `stationary.shoot = true` replaces `theta_minus` by the value on the
//!   stable curve of a subsonic end state.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use outflow_core::burgers::MIN_Q;
use outflow_core::solver::{Grid, Perturbation, PerturbationShape, TimeControl};
use outflow_core::waves::{r3_connect, r3_state, stationary_stable_boundary, StationaryOptions};
use outflow_core::{BoundaryData, EndStates, FluidState, GasModel};

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub gas: GasSection,
    pub endstates: EndstateSection,
    #[serde(default)]
    pub burgers: BurgersSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub perturbation: PerturbationSection,
    #[serde(default)]
    pub stationary: StationarySection,
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub verify: VerifySection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSection {
    #[serde(rename = "R", default = "one")]
    pub r: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default = "one")]
    pub kappa: f64,
}

impl Default for GasSection {
    fn default() -> Self {
        Self {
            r: 1.0,
            gamma: 1.4,
            mu: 1.0,
            kappa: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndstateSection {
    pub rho_plus: Option<f64>,
    pub u_plus: Option<f64>,
    pub theta_plus: f64,
    pub u_minus: Option<f64>,
    pub theta_minus: Option<f64>,
    pub rho_m: Option<f64>,
    pub u_m: Option<f64>,
    pub theta_m: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BurgersSection {
    #[serde(default = "default_q")]
    pub q: u32,
    /// Profile for the `burgers` suite.
    #[serde(default = "minus_one")]
    pub w_minus: f64,
    #[serde(default = "one")]
    pub w_plus: f64,
}

impl Default for BurgersSection {
    fn default() -> Self {
        Self {
            q: MIN_Q,
            w_minus: -1.0,
            w_plus: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { l: 100.0, n: 1000 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    pub snapshot_every: Option<f64>,
    #[serde(default)]
    pub snapshots: Vec<f64>,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            t_end: default_t_end(),
            cfl: default_cfl(),
            max_steps: default_max_steps(),
            snapshot_every: None,
            snapshots: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSection {
    #[serde(default = "default_shape")]
    pub shape: PerturbationShape,
    #[serde(default)]
    pub amplitude: [f64; 3],
    #[serde(default)]
    pub center: f64,
    #[serde(default = "one")]
    pub width: f64,
}

impl Default for PerturbationSection {
    fn default() -> Self {
        Self {
            shape: PerturbationShape::None,
            amplitude: [0.0; 3],
            center: 0.0,
            width: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarySection {
    pub tol: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub x_max: Option<f64>,
    pub delta0: Option<f64>,
    pub trust_factor: Option<f64>,
    pub spacing: Option<f64>,
    #[serde(default)]
    pub shoot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    #[default]
    Rarefaction,
    Stationary,
    Superposition,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    #[serde(default)]
    pub kind: TargetKind,
    /// Run even when the stability hypotheses fail (the failures are reported).
    #[serde(default)]
    pub allow_inadmissible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Burgers,
    Srw,
    Stationary,
    Decay,
    Entropy,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Self::Burgers => "burgers",
            Self::Srw => "srw",
            Self::Stationary => "stationary",
            Self::Decay => "decay",
            Self::Entropy => "entropy",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// Suites run by `verify` when none is named on the command line.
    #[serde(default = "all_suites")]
    pub suites: Vec<Suite>,
    /// Allowed deviation of fitted log-log slopes.
    #[serde(default = "default_slope_tol")]
    pub slope_tol: f64,
    /// Allowed deviation of the second-derivative sup-norm slope.
    #[serde(default = "default_second_slope_tol")]
    pub second_slope_tol: f64,
    /// Minimum observed order of finite-difference checks.
    #[serde(default = "default_min_order")]
    pub min_order: f64,
    #[serde(default = "default_isentrope_tol")]
    pub isentrope_tol: f64,
    #[serde(default = "default_residual_tol")]
    pub residual_tol: f64,
    #[serde(default = "default_min_r2")]
    pub min_r_squared: f64,
    /// L1 plateau bound as a multiple of the wave strength.
    #[serde(default = "default_plateau")]
    pub plateau_factor: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            suites: all_suites(),
            slope_tol: default_slope_tol(),
            second_slope_tol: default_second_slope_tol(),
            min_order: default_min_order(),
            isentrope_tol: default_isentrope_tol(),
            residual_tol: default_residual_tol(),
            min_r_squared: default_min_r2(),
            plateau_factor: default_plateau(),
            samples: default_samples(),
            seed: 0,
        }
    }
}

fn one() -> f64 {
    1.0
}
fn minus_one() -> f64 {
    -1.0
}
fn default_gamma() -> f64 {
    1.4
}
fn default_q() -> u32 {
    MIN_Q
}
fn default_t_end() -> f64 {
    10.0
}
fn default_cfl() -> f64 {
    0.5
}
fn default_max_steps() -> usize {
    10_000_000
}
fn default_shape() -> PerturbationShape {
    PerturbationShape::None
}
fn all_suites() -> Vec<Suite> {
    vec![Suite::Burgers, Suite::Srw, Suite::Stationary, Suite::Decay, Suite::Entropy]
}
fn default_slope_tol() -> f64 {
    0.1
}
fn default_second_slope_tol() -> f64 {
    0.15
}
fn default_min_order() -> f64 {
    1.9
}
fn default_isentrope_tol() -> f64 {
    1e-10
}
fn default_residual_tol() -> f64 {
    1e-6
}
fn default_min_r2() -> f64 {
    0.99
}
fn default_plateau() -> f64 {
    1.5
}
fn default_samples() -> usize {
    100_000
}

/// A parsed config together with the SHA-256 of its bytes.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: Config,
    pub hash: String,
}

impl LoadedConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, CliError> {
        let config: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self {
            config,
            hash: content_hash(text.as_bytes()),
        })
    }
}

pub fn content_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// End states after filling in the values implied by the curve rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub gas: GasModel,
    pub states: EndStates,
    /// Boundary temperature came from shooting onto the stable curve.
    pub shot: bool,
}

impl Config {
    pub fn gas_model(&self) -> Result<GasModel, CliError> {
        let g = &self.gas;
        Ok(GasModel::new(g.r, g.gamma, g.mu, g.kappa)?)
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        Ok(Grid::new(self.grid.l, self.grid.n)?)
    }

    pub fn time_control(&self) -> TimeControl {
        TimeControl {
            t_end: self.time.t_end,
            cfl: self.time.cfl,
            max_steps: self.time.max_steps,
        }
    }

    /// Explicit snapshot times plus multiples of `snapshot_every`.
    pub fn output_times(&self) -> Result<Vec<f64>, CliError> {
        let mut out = self.time.snapshots.clone();
        if let Some(every) = self.time.snapshot_every {
            if !(every > 0.0) {
                return Err(CliError::Config(format!("snapshot_every must be positive, got {every}")));
            }
            let n = (self.time.t_end / every + 1e-9).floor() as usize;
            out.extend((1..=n).map(|k| k as f64 * every));
        }
        Ok(out)
    }

    pub fn perturbation(&self) -> Perturbation {
        let p = &self.perturbation;
        Perturbation {
            shape: p.shape,
            amplitude: p.amplitude,
            center: p.center,
            width: p.width,
        }
    }

    pub fn stationary_options(&self) -> StationaryOptions {
        let s = &self.stationary;
        let d = StationaryOptions::default();
        StationaryOptions {
            tol: s.tol.unwrap_or(d.tol),
            rtol: s.rtol.unwrap_or(d.rtol),
            atol: s.atol.unwrap_or(d.atol),
            x_max: s.x_max.or(d.x_max),
            delta0: s.delta0.or(d.delta0),
            trust_factor: s.trust_factor.unwrap_or(d.trust_factor),
            spacing: s.spacing.or(d.spacing),
        }
    }

    fn middle(&self) -> Result<Option<FluidState>, CliError> {
        let e = &self.endstates;
        match (e.rho_m, e.u_m, e.theta_m) {
            (None, None, None) => Ok(None),
            (Some(r), Some(u), Some(t)) => Ok(Some(FluidState::new(r, u, t)?)),
            _ => Err(CliError::Config("middle state needs all of rho_m, u_m, theta_m".into())),
        }
    }

    /// Fill in omitted end-state values and the shooting boundary temperature.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let gas = self.gas_model()?;
        let e = &self.endstates;
        let middle = self.middle()?;
        let right = match (e.rho_plus, e.u_plus, middle) {
            (Some(r), Some(u), _) => FluidState::new(r, u, e.theta_plus)?,
            (None, None, Some(m)) => r3_state(&gas, &m, e.theta_plus)?,
            (Some(r), None, None) => match (e.u_minus, e.theta_minus) {
                (Some(u_minus), Some(theta_minus)) => {
                    // the curve offset u_- - u_+ does not depend on u_+
                    let probe = FluidState::new(r, 0.0, e.theta_plus)?;
                    let (_, offset) = r3_connect(&gas, &probe, theta_minus)?;
                    FluidState::new(r, u_minus - offset, e.theta_plus)?
                }
                _ => {
                    return Err(CliError::Config(
                        "u_plus may only be omitted when u_minus and theta_minus are given".into(),
                    ))
                }
            },
            (None, _, None) => {
                return Err(CliError::Config(
                    "endstates need rho_plus and u_plus unless a middle state is given".into(),
                ))
            }
            _ => {
                return Err(CliError::Config(
                    "give both rho_plus and u_plus, or neither to use the curve through the middle state".into(),
                ))
            }
        };
        let stationary_end = middle.unwrap_or(right);
        let opts = self.stationary_options();
        let u_minus = match e.u_minus {
            Some(u) => u,
            None if self.scenario.kind == TargetKind::Rarefaction && middle.is_none() => {
                let theta_minus = e
                    .theta_minus
                    .ok_or_else(|| CliError::Config("endstates.theta_minus is required".into()))?;
                r3_connect(&gas, &right, theta_minus)?.1
            }
            None => return Err(CliError::Config("endstates.u_minus is required".into())),
        };
        let (theta_minus, shot) = if self.stationary.shoot {
            (stationary_stable_boundary(&gas, &stationary_end, u_minus, &opts)?, true)
        } else {
            let t = e
                .theta_minus
                .ok_or_else(|| CliError::Config("endstates.theta_minus is required".into()))?;
            (t, false)
        };
        Ok(Resolved {
            gas,
            states: EndStates {
                left: BoundaryData::new(u_minus, theta_minus)?,
                middle,
                right,
            },
            shot,
        })
    }
}
