//! Stationary boundary layer followed by a 3-rarefaction.

use super::{RarefactionMode, RarefactionWave, StationaryWave, WaveError};
use crate::gas::{FluidState, GasModel};

/// `U(t, x) = U_stat(x) + U_rare(t, x) - U_m`, componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    stationary: StationaryWave,
    rarefaction: RarefactionWave,
}

impl Superposition {
    /// The rarefaction must start at the stationary end state.
    pub fn new(stationary: StationaryWave, rarefaction: RarefactionWave) -> Result<Self, WaveError> {
        let m = stationary.endstate();
        let l = rarefaction.left();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        if !(close(m.rho(), l.rho()) && close(m.u(), l.u()) && close(m.theta(), l.theta())) {
            return Err(WaveError::MiddleMismatch);
        }
        if stationary.gas() != rarefaction.gas() {
            return Err(WaveError::MiddleMismatch);
        }
        Ok(Self {
            stationary,
            rarefaction,
        })
    }

    pub fn with_mode(mut self, mode: RarefactionMode) -> Self {
        self.rarefaction = self.rarefaction.with_mode(mode);
        self
    }

    pub fn gas(&self) -> &GasModel {
        self.stationary.gas()
    }

    pub fn stationary(&self) -> &StationaryWave {
        &self.stationary
    }

    pub fn rarefaction(&self) -> &RarefactionWave {
        &self.rarefaction
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<FluidState, WaveError> {
        let s = self.stationary.eval(x);
        let r = self.rarefaction.eval(t, x)?;
        let m = self.stationary.endstate();
        Ok(FluidState::new(
            s.rho() + r.rho() - m.rho(),
            s.u() + r.u() - m.u(),
            s.theta() + r.theta() - m.theta(),
        )?)
    }
}
