//! 3-rarefaction waves: the centered fan and its Burgers-smoothed version.
//!
//! Along the 3-rarefaction curve through a state `(rho_r, u_r, theta_r)` the
//! isentrope `rho^(1-gamma) theta` is constant and, writing
//! `r = (rho/rho_r)^((gamma-1)/2)` and `k = 2/(gamma-1)`,
//!
//! ```text
//! theta = theta_r r^2,   rho = rho_r r^k,   u = u_r + k c_r (r - 1)
//! lambda3 = u + sqrt(R gamma theta) = u_r - k c_r + (1 + k) c_r r
//! ```
//!
//! so `lambda3` is affine in `r` and can be inverted in closed form. Both the
//! exact fan and the smoothed wave reduce to choosing the characteristic speed
//! `sigma(t, x)` and inverting it.

use serde::{Deserialize, Serialize};

use super::WaveError;
use crate::burgers::{riemann_solution, BurgersProfile};
use crate::gas::{FluidState, GasModel};

/// Relative tolerance for checking that two states lie on one 3-rarefaction curve.
pub const CURVE_TOL: f64 = 1e-10;

/// `(rho_-, u_-)` such that `right` lies on the 3-rarefaction curve through
/// `(rho_-, u_-, theta_-)`.
pub fn r3_connect(
    gas: &GasModel,
    right: &FluidState,
    theta_minus: f64,
) -> Result<(f64, f64), WaveError> {
    if !(theta_minus > 0.0) || theta_minus > right.theta() {
        return Err(WaveError::NotRarefaction {
            theta_minus,
            theta_plus: right.theta(),
        });
    }
    let k = 2.0 / (gas.gamma() - 1.0);
    let ratio = theta_minus / right.theta();
    let rho_minus = ratio.powf(1.0 / (gas.gamma() - 1.0)) * right.rho();
    let c_plus = gas.sound_speed(right.theta());
    let u_minus = right.u() + k * c_plus * (ratio.sqrt() - 1.0);
    Ok((rho_minus, u_minus))
}

/// State on the 3-rarefaction curve through `left` with temperature `theta`.
pub fn r3_state(gas: &GasModel, left: &FluidState, theta: f64) -> Result<FluidState, WaveError> {
    if !(theta >= left.theta()) {
        return Err(WaveError::NotRarefaction {
            theta_minus: left.theta(),
            theta_plus: theta,
        });
    }
    let k = 2.0 / (gas.gamma() - 1.0);
    let ratio = theta / left.theta();
    let rho = left.rho() * ratio.powf(1.0 / (gas.gamma() - 1.0));
    let u = left.u() + k * gas.sound_speed(left.theta()) * (ratio.sqrt() - 1.0);
    Ok(FluidState::new(rho, u, theta)?)
}

/// Which representation of the wave `eval` returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RarefactionMode {
    ExactFan,
    Smoothed,
}

/// A 3-rarefaction wave connecting `left` to `right`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RarefactionWave {
    gas: GasModel,
    left: FluidState,
    right: FluidState,
    mode: RarefactionMode,
    profile: BurgersProfile,
}

impl RarefactionWave {
    /// Validates that `right` lies on the 3-rarefaction curve through `left`.
    /// Equal states give a zero-strength wave.
    pub fn new(
        gas: GasModel,
        left: FluidState,
        right: FluidState,
        mode: RarefactionMode,
        q: u32,
    ) -> Result<Self, WaveError> {
        let g = gas.gamma();
        let iso_l = left.rho().powf(1.0 - g) * left.theta();
        let iso_r = right.rho().powf(1.0 - g) * right.theta();
        let iso_err = (iso_l - iso_r).abs() / iso_l.abs().max(iso_r.abs());
        let expected_u = r3_state(&gas, &left, right.theta()).map(|s| s.u());
        let u_ok = match expected_u {
            Ok(u) => (u - right.u()).abs() <= CURVE_TOL * u.abs().max(right.u().abs()).max(1.0),
            Err(_) => false,
        };
        if right.rho() < left.rho() || iso_err > CURVE_TOL || !u_ok {
            return Err(WaveError::NotOnCurve);
        }
        let w_minus = gas.lambda3(&left);
        let w_plus = gas.lambda3(&right);
        // same state up to rounding: collapse to a zero-strength wave
        let (right, w_plus) = if w_plus <= w_minus { (left, w_minus) } else { (right, w_plus) };
        let profile = BurgersProfile::new(w_minus, w_plus, q)?;
        Ok(Self {
            gas,
            left,
            right,
            mode,
            profile,
        })
    }

    /// Wave ending at `right` whose left state has temperature `theta_minus`.
    pub fn from_right(
        gas: GasModel,
        right: FluidState,
        theta_minus: f64,
        mode: RarefactionMode,
        q: u32,
    ) -> Result<Self, WaveError> {
        let (rho_minus, u_minus) = r3_connect(&gas, &right, theta_minus)?;
        let left = FluidState::new(rho_minus, u_minus, theta_minus)?;
        Self::new(gas, left, right, mode, q)
    }

    /// Wave starting at `left` whose right state has temperature `theta_plus`.
    pub fn from_left(
        gas: GasModel,
        left: FluidState,
        theta_plus: f64,
        mode: RarefactionMode,
        q: u32,
    ) -> Result<Self, WaveError> {
        let right = r3_state(&gas, &left, theta_plus)?;
        Self::new(gas, left, right, mode, q)
    }

    pub fn with_mode(mut self, mode: RarefactionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    pub fn left(&self) -> FluidState {
        self.left
    }

    pub fn right(&self) -> FluidState {
        self.right
    }

    pub fn mode(&self) -> RarefactionMode {
        self.mode
    }

    pub fn profile(&self) -> &BurgersProfile {
        &self.profile
    }

    /// `|(u_+ - u_-, theta_+ - theta_-)|`.
    pub fn strength(&self) -> f64 {
        (self.right.u() - self.left.u()).hypot(self.right.theta() - self.left.theta())
    }

    fn k(&self) -> f64 {
        2.0 / (self.gas.gamma() - 1.0)
    }

    /// `r = (rho/rho_+)^((gamma-1)/2)` of the state with characteristic speed `sigma`.
    fn ratio_for_speed(&self, sigma: f64) -> f64 {
        let k = self.k();
        let c_plus = self.gas.sound_speed(self.right.theta());
        (sigma - self.right.u() + k * c_plus) / ((1.0 + k) * c_plus)
    }

    /// State on the wave's curve whose 3-characteristic speed is `sigma`.
    pub fn state_for_speed(&self, sigma: f64) -> Result<FluidState, WaveError> {
        if sigma <= self.profile.w_minus() {
            return Ok(self.left);
        }
        if sigma >= self.profile.w_plus() {
            return Ok(self.right);
        }
        let r = self.ratio_for_speed(sigma);
        if !(r > 0.0) {
            return Err(WaveError::Inversion { sigma });
        }
        let k = self.k();
        let c_plus = self.gas.sound_speed(self.right.theta());
        Ok(FluidState::new(
            self.right.rho() * r.powf(k),
            self.right.u() + k * c_plus * (r - 1.0),
            self.right.theta() * r * r,
        )?)
    }

    /// Centered fan at `t > 0`.
    pub fn exact_at(&self, t: f64, x: f64) -> Result<FluidState, WaveError> {
        let sigma = riemann_solution(self.profile.w_minus(), self.profile.w_plus(), t, x)?;
        self.state_for_speed(sigma)
    }

    /// Smoothed wave: `lambda3 = w(1 + t, x)` with `w` the smooth Burgers solution.
    pub fn smoothed_at(&self, t: f64, x: f64) -> Result<FluidState, WaveError> {
        if !(t >= 0.0) {
            return Err(WaveError::NegativeTime(t));
        }
        let (w, _) = self.profile.exact_solution(1.0 + t, x)?;
        self.state_for_speed(w)
    }

    /// Smoothed state with its exact spatial derivative `(rho_x, u_x, theta_x)`.
    pub fn smoothed_with_derivative(
        &self,
        t: f64,
        x: f64,
    ) -> Result<(FluidState, [f64; 3]), WaveError> {
        if !(t >= 0.0) {
            return Err(WaveError::NegativeTime(t));
        }
        let v = self.profile.evaluate(1.0 + t, x)?;
        let state = self.state_for_speed(v.w)?;
        if v.w <= self.profile.w_minus() || v.w >= self.profile.w_plus() {
            return Ok((state, [0.0; 3]));
        }
        let k = self.k();
        let c_plus = self.gas.sound_speed(self.right.theta());
        let r = self.ratio_for_speed(v.w);
        let r_x = v.w_x / ((1.0 + k) * c_plus);
        let d = [
            self.right.rho() * k * r.powf(k - 1.0) * r_x,
            k * c_plus * r_x,
            2.0 * self.right.theta() * r * r_x,
        ];
        Ok((state, d))
    }

    /// Value at simulation time `t`. Both modes are shifted by one time unit:
    /// the fan is `exact_at(1 + t, x)` and the smoothed wave uses `w(1 + t, x)`.
    pub fn eval(&self, t: f64, x: f64) -> Result<FluidState, WaveError> {
        if !(t >= 0.0) {
            return Err(WaveError::NegativeTime(t));
        }
        match self.mode {
            RarefactionMode::ExactFan => self.exact_at(1.0 + t, x),
            RarefactionMode::Smoothed => self.smoothed_at(t, x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas(r: f64, gamma: f64) -> GasModel {
        GasModel::new(r, gamma, 1.0, 1.0).unwrap()
    }

    /// Composite Simpson for the curve integral `int sqrt(R gamma rho_+^(1-gamma) theta_+) z^((gamma-3)/2) dz`.
    fn curve_integral(gas: &GasModel, right: &FluidState, rho: f64) -> f64 {
        let g = gas.gamma();
        let a = (gas.r() * g * right.rho().powf(1.0 - g) * right.theta()).sqrt();
        let f = |z: f64| a * z.powf((g - 3.0) / 2.0);
        let n = 2000;
        let (lo, hi) = (right.rho(), rho);
        let h = (hi - lo) / n as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn connect_examples() {
        let right = FluidState::new(2.0, 0.0, 4.0).unwrap();
        let (rho, _) = r3_connect(&gas(1.0, 2.0), &right, 1.0).unwrap();
        assert!((rho - 0.5).abs() < 1e-15);

        let right = FluidState::new(1.0, 0.7, 1.0).unwrap();
        let (rho, u) = r3_connect(&gas(1.0, 3.0), &right, 0.25).unwrap();
        assert!((rho - 0.5).abs() < 1e-15);
        assert!((u - (0.7 - 3f64.sqrt() / 2.0)).abs() < 1e-14);

        let (rho, u) = r3_connect(&gas(1.0, 1.4), &right, 1.0).unwrap();
        assert_eq!((rho, u), (1.0, 0.7));

        assert!(r3_connect(&gas(1.0, 1.4), &right, 1.5).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &gamma in &[1.4, 5.0 / 3.0, 2.0, 3.0] {
            let g = gas(1.3, gamma);
            let right = FluidState::new(1.7, 0.2, 2.1).unwrap();
            let (rho_m, u_m) = r3_connect(&g, &right, 1.2).unwrap();
            let quad = right.u() + curve_integral(&g, &right, rho_m);
            assert!((u_m - quad).abs() < 1e-10, "gamma={gamma}: {u_m} vs {quad}");
        }
    }

    #[test]
    fn fan_edges_return_end_states() {
        let g = gas(1.0, 1.4);
        let right = FluidState::new(1.0, 0.5, 1.0).unwrap();
        let w = RarefactionWave::from_right(g, right, 0.6, RarefactionMode::ExactFan, 16).unwrap();
        assert_eq!(w.state_for_speed(g.lambda3(&right)).unwrap(), right);
        assert_eq!(w.state_for_speed(g.lambda3(&w.left())).unwrap(), w.left());
        let t = 3.0;
        assert_eq!(w.exact_at(t, g.lambda3(&right) * t + 1.0).unwrap(), right);
    }

    #[test]
    fn interior_state_has_requested_speed_and_lies_on_curve() {
        let g = gas(1.0, 1.4);
        let right = FluidState::new(1.3, 0.4, 1.5).unwrap();
        let w = RarefactionWave::from_right(g, right, 0.7, RarefactionMode::ExactFan, 16).unwrap();
        let (a, b) = (g.lambda3(&w.left()), g.lambda3(&right));
        for i in 1..20 {
            let sigma = a + (b - a) * i as f64 / 20.0;
            let s = w.state_for_speed(sigma).unwrap();
            assert!((g.lambda3(&s) - sigma).abs() < 1e-10);
            // independently: same isentrope and velocity from the quadrature of the curve
            let iso = |s: &FluidState| s.rho().powf(1.0 - 1.4) * s.theta();
            assert!((iso(&s) - iso(&right)).abs() < 1e-10 * iso(&right));
            let u = right.u() + curve_integral(&g, &right, s.rho());
            assert!((u - s.u()).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_states_off_curve() {
        let g = gas(1.0, 1.4);
        let left = FluidState::new(0.8, 0.0, 0.9).unwrap();
        let right = FluidState::new(1.0, 0.3, 1.0).unwrap();
        assert!(matches!(
            RarefactionWave::new(g, left, right, RarefactionMode::ExactFan, 16),
            Err(WaveError::NotOnCurve)
        ));
        // swapped order is a compression, not a rarefaction
        let w = RarefactionWave::from_right(g, right, 0.7, RarefactionMode::ExactFan, 16).unwrap();
        assert!(RarefactionWave::new(g, right, w.left(), RarefactionMode::ExactFan, 16).is_err());
    }

    #[test]
    fn from_left_and_from_right_agree() {
        let g = gas(1.0, 1.4);
        let left = FluidState::new(0.9, -0.2, 0.8).unwrap();
        let a = RarefactionWave::from_left(g, left, 1.1, RarefactionMode::Smoothed, 16).unwrap();
        let b = RarefactionWave::from_right(g, a.right(), 0.8, RarefactionMode::Smoothed, 16).unwrap();
        assert!(a.left().distance(&b.left()) < 1e-14);
    }

    #[test]
    fn smoothed_wave_boundary_behaviour() {
        let g = gas(1.0, 1.4);
        let right = FluidState::new(1.0, 0.4, 1.0).unwrap();
        let w = RarefactionWave::from_right(g, right, 0.8, RarefactionMode::Smoothed, 16).unwrap();
        let lam_left = g.lambda3(&w.left());
        assert!(w.left().u() + (1.4 * 0.8f64).sqrt() > 0.0);
        for &t in &[0.0, 1.0, 10.0, 100.0] {
            // flat left region, including the boundary trace at x = 0
            for i in 0..10 {
                let x = lam_left * (1.0 + t) * i as f64 / 10.0;
                assert_eq!(w.smoothed_at(t, x).unwrap(), w.left());
            }
            let far = w.smoothed_at(t, 2.0 * (1.0 + t) + 200.0).unwrap();
            assert!(far.distance(&right) < 1e-8);
        }
    }

    #[test]
    fn smoothed_stays_on_isentrope_of_right_state() {
        let g = gas(1.0, 1.4);
        let right = FluidState::new(1.2, 0.1, 1.3).unwrap();
        let w = RarefactionWave::from_right(g, right, 0.5, RarefactionMode::Smoothed, 16).unwrap();
        let iso = |s: &FluidState| s.rho().powf(-0.4) * s.theta();
        for i in 0..200 {
            let s = w.smoothed_at(5.0, i as f64 * 0.3).unwrap();
            assert!((iso(&s) - iso(&right)).abs() <= 1e-10 * iso(&right));
        }
    }
}
