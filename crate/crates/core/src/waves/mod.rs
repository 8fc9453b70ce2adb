//! Asymptotic wave patterns: 3-rarefactions, stationary boundary layers and
//! their superposition.

pub mod admissibility;
pub mod rarefaction;
pub mod stationary;
pub mod superposition;

use thiserror::Error;

use crate::burgers::BurgersError;
use crate::gas::{BoundaryData, FluidState, GasModel, ValidationError};
use crate::ode::OdeError;

pub use admissibility::{admissibility_check, AdmissibilityReport, Condition, ScenarioKind};
pub use rarefaction::{r3_connect, r3_state, RarefactionMode, RarefactionWave};
pub use stationary::{
    stationary_stable_boundary, DecayEstimate, DecayModel, MachRegime, StationaryOptions, StationaryWave,
};
pub use superposition::Superposition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Burgers(#[from] BurgersError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("theta_- = {theta_minus} exceeds theta_+ = {theta_plus}: not a 3-rarefaction")]
    NotRarefaction { theta_minus: f64, theta_plus: f64 },
    #[error("states are not connected by a 3-rarefaction curve")]
    NotOnCurve,
    #[error("characteristic speed {sigma} cannot be inverted on the curve")]
    Inversion { sigma: f64 },
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("end state velocity u_m = {0} is not outflow")]
    NotOutflow(f64),
    #[error("boundary data at distance {distance} is outside the radius {radius}")]
    OutsideNeighborhood { distance: f64, radius: f64 },
    #[error("stationary trajectory diverged at x = {x} (closest approach {closest})")]
    Divergence { x: f64, closest: f64 },
    #[error("stationary trajectory ended at distance {distance} > tol {tol}")]
    NotConverged { distance: f64, tol: f64 },
    #[error("velocity changed sign at x = {x}")]
    VelocitySignChange { x: f64 },
    #[error("zero velocity in the stationary system")]
    ZeroVelocity,
    #[error("end state is not subsonic (M = {mach}); every nearby boundary value converges")]
    ShootingUnnecessary { mach: f64 },
    #[error("no sign change of the shooting functional in the admissible range")]
    NoSignChange,
    #[error("rarefaction left state does not match the stationary end state")]
    MiddleMismatch,
}

/// Target profile that a perturbed solution is compared against.
#[derive(Debug, Clone, PartialEq)]
pub enum WavePattern {
    Constant { gas: GasModel, state: FluidState },
    Rarefaction(RarefactionWave),
    Stationary(StationaryWave),
    Superposition(Superposition),
}

impl WavePattern {
    pub fn gas(&self) -> &GasModel {
        match self {
            Self::Constant { gas, .. } => gas,
            Self::Rarefaction(w) => w.gas(),
            Self::Stationary(w) => w.gas(),
            Self::Superposition(w) => w.gas(),
        }
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<FluidState, WaveError> {
        match self {
            Self::Constant { state, .. } => Ok(*state),
            Self::Rarefaction(w) => w.eval(t, x),
            Self::Stationary(w) => Ok(w.eval(x)),
            Self::Superposition(w) => w.eval(t, x),
        }
    }

    /// Values imposed at `x = 0`.
    pub fn boundary(&self) -> BoundaryData {
        let s = match self {
            Self::Constant { state, .. } => *state,
            Self::Rarefaction(w) => w.left(),
            Self::Stationary(w) => return w.boundary(),
            Self::Superposition(w) => return w.stationary().boundary(),
        };
        BoundaryData {
            u_minus: s.u(),
            theta_minus: s.theta(),
        }
    }

    /// State as `x -> infinity`.
    pub fn far_field(&self) -> FluidState {
        match self {
            Self::Constant { state, .. } => *state,
            Self::Rarefaction(w) => w.right(),
            Self::Stationary(w) => w.endstate(),
            Self::Superposition(w) => w.rarefaction().right(),
        }
    }

    /// Same pattern with its rarefaction part evaluated in the given mode.
    pub fn with_mode(&self, mode: RarefactionMode) -> Self {
        match self {
            Self::Rarefaction(w) => Self::Rarefaction(w.with_mode(mode)),
            Self::Superposition(w) => Self::Superposition(w.clone().with_mode(mode)),
            other => other.clone(),
        }
    }

    pub fn rarefaction(&self) -> Option<&RarefactionWave> {
        match self {
            Self::Rarefaction(w) => Some(w),
            Self::Superposition(w) => Some(w.rarefaction()),
            _ => None,
        }
    }

    pub fn stationary(&self) -> Option<&StationaryWave> {
        match self {
            Self::Stationary(w) => Some(w),
            Self::Superposition(w) => Some(w.stationary()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_pattern_boundary_and_far_field() {
        let gas = GasModel::default();
        let state = FluidState::new(1.0, -0.5, 2.0).unwrap();
        let p = WavePattern::Constant { gas, state };
        assert_eq!(p.eval(3.0, 7.0).unwrap(), state);
        assert_eq!(p.boundary(), BoundaryData::new(-0.5, 2.0).unwrap());
        assert_eq!(p.far_field(), state);
    }

    #[test]
    fn rarefaction_pattern_switches_mode() {
        let gas = GasModel::default();
        let right = FluidState::new(1.0, 0.5, 1.0).unwrap();
        let w = RarefactionWave::from_right(gas, right, 0.9, RarefactionMode::Smoothed, 16).unwrap();
        let p = WavePattern::Rarefaction(w);
        let fan = p.with_mode(RarefactionMode::ExactFan);
        assert_eq!(fan.rarefaction().unwrap().mode(), RarefactionMode::ExactFan);
        assert_eq!(p.boundary().u_minus, w.left().u());
        assert_eq!(p.far_field(), right);
    }
}
