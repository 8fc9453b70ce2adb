//! Ideal polytropic gas model and pointwise fluid states.
//!
//! All thermodynamics is fixed by four constants: the gas constant `R`, the
//! adiabatic exponent `gamma`, the viscosity `mu` and the heat conductivity
//! `kappa`. The specific heat `c_v = R / (gamma - 1)` is derived on demand and
//! never stored.
//!
//! ```text
//! P = R rho theta,   e = c_v theta,   s = c_v ln(rho^(1-gamma) theta)
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValidationError {
    #[error("gas constant R must be positive, got {0}")]
    GasConstant(f64),
    #[error("adiabatic exponent gamma must exceed 1, got {0}")]
    Gamma(f64),
    #[error("viscosity mu must be positive, got {0}")]
    Viscosity(f64),
    #[error("heat conductivity kappa must be positive, got {0}")]
    Conductivity(f64),
    #[error("density must be positive and finite, got {0}")]
    Density(f64),
    #[error("temperature must be positive and finite, got {0}")]
    Temperature(f64),
    #[error("velocity must be finite, got {0}")]
    Velocity(f64),
}

/// Physical constants of a viscous, heat-conducting ideal polytropic gas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    r: f64,
    gamma: f64,
    mu: f64,
    kappa: f64,
}

impl Default for GasModel {
    /// Normalized units: `R = 1`, `gamma = 1.4`, `mu = kappa = 1`.
    fn default() -> Self {
        Self {
            r: 1.0,
            gamma: 1.4,
            mu: 1.0,
            kappa: 1.0,
        }
    }
}

impl GasModel {
    pub fn new(r: f64, gamma: f64, mu: f64, kappa: f64) -> Result<Self, ValidationError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(ValidationError::GasConstant(r));
        }
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(ValidationError::Gamma(gamma));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(ValidationError::Viscosity(mu));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(ValidationError::Conductivity(kappa));
        }
        Ok(Self { r, gamma, mu, kappa })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Specific heat at constant volume, `R / (gamma - 1)`.
    pub fn cv(&self) -> f64 {
        self.r / (self.gamma - 1.0)
    }

    pub fn pressure(&self, s: &FluidState) -> f64 {
        self.r * s.rho * s.theta
    }

    /// Specific entropy `c_v ln(rho^(1-gamma) theta)`.
    pub fn entropy(&self, s: &FluidState) -> f64 {
        self.cv() * ((1.0 - self.gamma) * s.rho.ln() + s.theta.ln())
    }

    pub fn sound_speed(&self, theta: f64) -> f64 {
        (self.r * self.gamma * theta).sqrt()
    }

    /// The third characteristic speed `u + sqrt(R gamma theta)`.
    pub fn lambda3(&self, s: &FluidState) -> f64 {
        s.u + self.sound_speed(s.theta)
    }

    /// `|u| / sqrt(R gamma theta)`.
    pub fn mach(&self, s: &FluidState) -> f64 {
        s.u.abs() / self.sound_speed(s.theta)
    }

    /// Specific total energy `c_v theta + u^2 / 2`.
    pub fn specific_total_energy(&self, s: &FluidState) -> f64 {
        self.cv() * s.theta + 0.5 * s.u * s.u
    }
}

/// Density, velocity and temperature at a point. Density and temperature are
/// strictly positive by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    pub(crate) rho: f64,
    pub(crate) u: f64,
    pub(crate) theta: f64,
}

impl FluidState {
    pub fn new(rho: f64, u: f64, theta: f64) -> Result<Self, ValidationError> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(ValidationError::Density(rho));
        }
        if !u.is_finite() {
            return Err(ValidationError::Velocity(u));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(ValidationError::Temperature(theta));
        }
        Ok(Self { rho, u, theta })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.rho, self.u, self.theta]
    }

    /// Euclidean distance between the `(rho, u, theta)` triples.
    pub fn distance(&self, other: &FluidState) -> f64 {
        let d = [
            self.rho - other.rho,
            self.u - other.u,
            self.theta - other.theta,
        ];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

/// Boundary data `(u_-, theta_-)` imposed at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub u_minus: f64,
    pub theta_minus: f64,
}

impl BoundaryData {
    pub fn new(u_minus: f64, theta_minus: f64) -> Result<Self, ValidationError> {
        if !u_minus.is_finite() {
            return Err(ValidationError::Velocity(u_minus));
        }
        if !(theta_minus > 0.0 && theta_minus.is_finite()) {
            return Err(ValidationError::Temperature(theta_minus));
        }
        Ok(Self {
            u_minus,
            theta_minus,
        })
    }
}

/// Boundary data, optional middle state and far-field state of a problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndStates {
    pub left: BoundaryData,
    pub middle: Option<FluidState>,
    pub right: FluidState,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas(r: f64, gamma: f64) -> GasModel {
        GasModel::new(r, gamma, 1.0, 1.0).unwrap()
    }

    #[test]
    fn pressure_examples() {
        let s = FluidState::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(gas(1.0, 1.4).pressure(&s), 1.0);
        let s = FluidState::new(3.0, 0.0, 0.5).unwrap();
        assert_eq!(gas(2.0, 1.4).pressure(&s), 3.0);
        let s = FluidState::new(1.2, 0.0, 300.0).unwrap();
        assert!((gas(8.314, 1.4).pressure(&s) - 2993.04).abs() < 1e-9);
    }

    #[test]
    fn entropy_examples() {
        let g = gas(1.0, 1.4);
        assert_eq!(g.entropy(&FluidState::new(1.0, 0.0, 1.0).unwrap()), 0.0);
        // gamma = 2 gives c_v = R and rho^(-1) theta = 1.
        let g2 = gas(1.0, 2.0);
        assert!(g2.entropy(&FluidState::new(2.0, 0.0, 2.0).unwrap()).abs() < 1e-15);
        // 40-digit reference: 2.5 * ln(0.5^-0.4 * 1.3)
        let s = FluidState::new(0.5, 0.0, 1.3).unwrap();
        let want = 1.349_057_841_728_672_9;
        assert!((g.entropy(&s) - want).abs() < 1e-14 * want);
    }

    #[test]
    fn lambda3_examples() {
        let s = FluidState::new(1.0, 0.5, 0.25).unwrap();
        assert_eq!(gas(1.0, 4.0).lambda3(&s), 1.5);
        let g = gas(1.0, 1.4);
        let s = FluidState::new(1.0, 0.0, 3.7).unwrap();
        assert_eq!(g.lambda3(&s), (1.4f64 * 3.7).sqrt());
        let s = FluidState::new(1.0, -0.3, 2.0).unwrap();
        assert!((g.lambda3(&s) - 1.373_320_053_068_151_1).abs() < 1e-15);
    }

    #[test]
    fn mach_examples() {
        let g = gas(1.0, 1.4);
        assert_eq!(g.mach(&FluidState::new(1.0, 0.0, 1.0).unwrap()), 0.0);
        assert_eq!(gas(1.0, 4.0).mach(&FluidState::new(1.0, -1.0, 0.25).unwrap()), 1.0);
        let m = g.mach(&FluidState::new(1.0, -2.0, 1.0).unwrap());
        assert!((m - 1.690_308_509_457_033_2).abs() < 1e-15);
    }

    #[test]
    fn total_energy_examples() {
        // gamma = 2, R = 1 gives c_v = 1.
        let g = gas(1.0, 2.0);
        assert_eq!(g.specific_total_energy(&FluidState::new(1.0, 0.0, 1.0).unwrap()), 1.0);
        // kinetic part alone: E - c_v theta = u^2/2
        let s = FluidState::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(g.specific_total_energy(&s) - g.cv() * s.theta(), 2.0);
        let g = gas(1.0, 1.4);
        let s = FluidState::new(1.0, -1.0, 2.0).unwrap();
        assert!((g.specific_total_energy(&s) - 5.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(matches!(FluidState::new(0.0, 0.0, 1.0), Err(ValidationError::Density(_))));
        assert!(matches!(FluidState::new(1.0, 0.0, -1.0), Err(ValidationError::Temperature(_))));
        assert!(matches!(FluidState::new(1.0, f64::NAN, 1.0), Err(ValidationError::Velocity(_))));
        assert!(GasModel::new(0.0, 1.4, 1.0, 1.0).is_err());
        assert!(GasModel::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(GasModel::new(1.0, 1.4, 0.0, 1.0).is_err());
        assert!(GasModel::new(1.0, 1.4, 1.0, -1.0).is_err());
        assert!(BoundaryData::new(-0.5, 0.0).is_err());
    }

    #[test]
    fn cv_is_derived() {
        let g = gas(2.0, 1.5);
        assert_eq!(g.cv(), 2.0 / 0.5);
    }

    #[test]
    fn sonic_state_has_unit_mach() {
        for &(r, gamma, theta) in &[(1.0, 4.0, 0.25), (2.0, 2.0, 0.5), (0.5, 1.4, 3.0)] {
            let g = gas(r, gamma);
            let c = g.sound_speed(theta);
            let s = FluidState::new(1.0, -c, theta).unwrap();
            assert_eq!(g.mach(&s), 1.0);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn pressure_and_energy_positive(
                r in 0.1f64..10.0, gamma in 1.01f64..3.0,
                rho in 1e-3f64..1e3, u in -10.0f64..10.0, theta in 1e-3f64..1e3,
            ) {
                let g = gas(r, gamma);
                let s = FluidState::new(rho, u, theta).unwrap();
                prop_assert!(g.pressure(&s) > 0.0);
                prop_assert!(g.specific_total_energy(&s) > 0.0);
            }

            #[test]
            fn lambda3_shift_is_velocity_shift(
                theta in 1e-2f64..1e2, u1 in -5.0f64..5.0, u2 in -5.0f64..5.0,
            ) {
                let g = GasModel::default();
                let a = g.lambda3(&FluidState::new(1.0, u1, theta).unwrap());
                let b = g.lambda3(&FluidState::new(1.0, u2, theta).unwrap());
                prop_assert!(((a - b) - (u1 - u2)).abs() <= 1e-13 * (1.0 + a.abs() + b.abs()));
            }

            #[test]
            fn entropy_constant_on_isentrope(
                gamma in 1.05f64..3.0, rho in 1e-2f64..1e2, theta in 1e-2f64..1e2, k in 0.1f64..10.0,
            ) {
                let g = gas(1.0, gamma);
                let a = g.entropy(&FluidState::new(rho, 0.0, theta).unwrap());
                let b = g.entropy(&FluidState::new(k * rho, 0.0, k.powf(gamma - 1.0) * theta).unwrap());
                let scale = g.cv() * ((gamma - 1.0) * rho.ln().abs() + theta.ln().abs() + k.ln().abs() * gamma).max(1.0);
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }
    }
}
