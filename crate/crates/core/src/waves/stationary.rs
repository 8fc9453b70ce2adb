//! Stationary boundary-layer solutions on the half-line.
//!
//! A stationary solution has constant mass flux `m = rho u`. Integrating the
//! momentum and energy equations once from `x` to infinity gives the
//! first-order system solved here:
//!
//! ```text
//! mu u'        = m (u - u_m) + (R m theta / u - P_m)
//! kappa theta' = m c_v (theta - theta_m) + m (u^2 - u_m^2)/2 + (R m theta - u_m P_m) - mu u u'
//! ```
//!
//! with `P_m = R rho_m theta_m`. Its linearization at `(u_m, theta_m)` has
//! determinant proportional to `u_m^2 - R gamma theta_m`: in the supersonic
//! case both eigenvalues are negative (every nearby boundary value is
//! attracted), in the subsonic case there is one stable direction only.
//!
//! Profiles are integrated forward from `x = 0` on a uniform output grid and
//! stored with their exact slopes, so they can be differentiated by finite
//! differences and interpolated with a monotone cubic.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::WaveError;
use crate::gas::{BoundaryData, FluidState, GasModel};
use crate::interp::MonotoneCubic;
use crate::ode::Dopri5;

/// `|M_m - 1|` below which the end state counts as transonic.
pub const TRANSONIC_BAND: f64 = 1e-6;

/// Deviations below this are treated as integration noise when fitting decay.
const FIT_FLOOR: f64 = 1e-8;
const MAX_SAMPLES: f64 = 50_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MachRegime {
    Supersonic,
    Transonic,
    Subsonic,
}

pub fn classify(mach: f64) -> MachRegime {
    if (mach - 1.0).abs() < TRANSONIC_BAND {
        MachRegime::Transonic
    } else if mach > 1.0 {
        MachRegime::Supersonic
    } else {
        MachRegime::Subsonic
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryOptions {
    /// Required distance to the end state at the end of the profile.
    pub tol: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Integration length; defaults to `60 / c` with `c` the slowest linear decay rate.
    pub x_max: Option<f64>,
    /// Admissible boundary-data radius; defaults to `0.1 min(|u_m|, theta_m)`.
    pub delta0: Option<f64>,
    /// Divergence is declared once the deviation exceeds this multiple of the strength.
    pub trust_factor: f64,
    /// Output grid spacing; defaults to `min(0.005, 0.025 / |lambda_fast|)`.
    pub spacing: Option<f64>,
}

impl Default for StationaryOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            rtol: 1e-10,
            atol: 1e-10,
            x_max: None,
            delta0: None,
            trust_factor: 10.0,
            spacing: None,
        }
    }
}

/// Right-hand side `(u', theta')` of the once-integrated stationary system.
pub fn stationary_reduced_rhs(
    gas: &GasModel,
    m: f64,
    endstate: &FluidState,
    u: f64,
    theta: f64,
) -> Result<(f64, f64), WaveError> {
    if u == 0.0 || !u.is_finite() {
        return Err(WaveError::ZeroVelocity);
    }
    Ok(reduced_rhs_unchecked(gas, m, endstate, u, theta))
}

#[inline]
fn reduced_rhs_unchecked(gas: &GasModel, m: f64, end: &FluidState, u: f64, theta: f64) -> (f64, f64) {
    let r = gas.r();
    let p_m = r * end.rho() * end.theta();
    let p = r * m * theta / u;
    let du = (m * (u - end.u()) + (p - p_m)) / gas.mu();
    let dtheta = (m * gas.cv() * (theta - end.theta())
        + 0.5 * m * (u * u - end.u() * end.u())
        + (u * p - end.u() * p_m)
        - gas.mu() * u * du)
        / gas.kappa();
    (du, dtheta)
}

/// Jacobian of the reduced system at the end state.
pub fn linearization(gas: &GasModel, endstate: &FluidState) -> [[f64; 2]; 2] {
    let (rho, u, theta) = (endstate.rho(), endstate.u(), endstate.theta());
    let m = rho * u;
    let r = gas.r();
    [
        [m * (1.0 - r * theta / (u * u)) / gas.mu(), r * rho / gas.mu()],
        [r * rho * theta / gas.kappa(), m * gas.cv() / gas.kappa()],
    ]
}

/// Eigenvalues of a 2x2 matrix with real spectrum, in ascending order.
/// The stationary Jacobian always has `J12 J21 > 0`, so its spectrum is real.
pub fn eigenvalues(j: &[[f64; 2]; 2]) -> (f64, f64) {
    let tr = j[0][0] + j[1][1];
    let half_gap = 0.5 * (j[0][0] - j[1][1]);
    let disc = (half_gap * half_gap + j[0][1] * j[1][0]).max(0.0).sqrt();
    (0.5 * tr - disc, 0.5 * tr + disc)
}

/// Fitted tail model of `|u - u_m|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum DecayModel {
    /// `|u - u_m| <= C delta e^{-c x}`.
    Exponential { c: f64, big_c: f64 },
    /// `|u - u_m| <= C delta / (1 + delta x)^(k+1)`.
    Algebraic { k: f64, big_c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayEstimate {
    pub model: DecayModel,
    pub r_squared: f64,
    pub samples: usize,
    pub x_from: f64,
    pub x_to: f64,
}

impl DecayEstimate {
    /// Exponential rate, if the exponential model was fitted.
    pub fn rate(&self) -> Option<f64> {
        match self.model {
            DecayModel::Exponential { c, .. } => Some(c),
            DecayModel::Algebraic { .. } => None,
        }
    }
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, R^2)`.
pub fn linear_regression(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (a, b, r2)
}

/// Boundary-layer profile connecting `(u_-, theta_-)` at `x = 0` to the end state.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryWave {
    gas: GasModel,
    boundary: BoundaryData,
    endstate: FluidState,
    mass_flux: f64,
    regime: MachRegime,
    spacing: f64,
    xs: Vec<f64>,
    us: Vec<f64>,
    thetas: Vec<f64>,
    u_interp: MonotoneCubic,
    theta_interp: MonotoneCubic,
    terminal_distance: f64,
    decay: Option<DecayEstimate>,
    eigenvalues: (f64, f64),
}

/// Raw forward trajectory on the uniform output grid.
struct Trajectory {
    xs: Vec<f64>,
    ys: Vec<[f64; 2]>,
    dys: Vec<[f64; 2]>,
    /// Set when the trajectory left the trust region or `u` changed sign.
    escaped: Option<Escape>,
}

#[derive(Debug, Clone, Copy)]
enum Escape {
    TrustRegion,
    SignChange,
}

struct Integration<'a> {
    gas: &'a GasModel,
    endstate: &'a FluidState,
    m: f64,
    spacing: f64,
    x_max: f64,
    trust: f64,
    solver: Dopri5,
}

impl Integration<'_> {
    fn run(&self, start: [f64; 2]) -> Result<Trajectory, WaveError> {
        let (gas, end, m) = (self.gas, self.endstate, self.m);
        let rhs = |_: f64, y: &[f64; 2]| {
            if y[0] == 0.0 {
                return [f64::NAN; 2];
            }
            let (a, b) = reduced_rhs_unchecked(gas, m, end, y[0], y[1]);
            [a, b]
        };
        let n = (self.x_max / self.spacing).ceil() as usize;
        let mut xs = Vec::with_capacity(n + 1);
        let mut ys = Vec::with_capacity(n + 1);
        let mut dys = Vec::with_capacity(n + 1);
        let mut y = start;
        xs.push(0.0);
        ys.push(y);
        dys.push(rhs(0.0, &y));
        let mut escaped = None;
        for i in 0..n {
            let (x0, x1) = (i as f64 * self.spacing, (i + 1) as f64 * self.spacing);
            let out = self
                .solver
                .integrate(rhs, x0, y, x1, |_, _, _| ControlFlow::Continue(()))?;
            y = out.y;
            if y[0] * end.u() <= 0.0 {
                escaped = Some(Escape::SignChange);
                break;
            }
            xs.push(x1);
            ys.push(y);
            dys.push(rhs(x1, &y));
            if (y[0] - end.u()).hypot(y[1] - end.theta()) > self.trust {
                escaped = Some(Escape::TrustRegion);
                break;
            }
        }
        Ok(Trajectory {
            xs,
            ys,
            dys,
            escaped,
        })
    }
}

struct Setup {
    m: f64,
    strength: f64,
    regime: MachRegime,
    eig: (f64, f64),
    x_max: f64,
    spacing: f64,
}

fn setup(
    gas: &GasModel,
    boundary: &BoundaryData,
    endstate: &FluidState,
    opts: &StationaryOptions,
) -> Result<Setup, WaveError> {
    if !(endstate.u() < 0.0) {
        return Err(WaveError::NotOutflow(endstate.u()));
    }
    let strength = (endstate.u() - boundary.u_minus).hypot(endstate.theta() - boundary.theta_minus);
    let delta0 = opts
        .delta0
        .unwrap_or(0.1 * endstate.u().abs().min(endstate.theta()));
    if strength >= delta0 {
        return Err(WaveError::OutsideNeighborhood {
            distance: strength,
            radius: delta0,
        });
    }
    let regime = classify(gas.mach(endstate));
    let eig = eigenvalues(&linearization(gas, endstate));
    // slowest decaying (stable) rate and fastest rate magnitude
    let slow = match regime {
        MachRegime::Supersonic => -eig.1,
        MachRegime::Subsonic => -eig.0,
        MachRegime::Transonic => strength.max(1e-3),
    };
    let fast = eig.0.abs().max(eig.1.abs());
    let x_max = opts.x_max.unwrap_or(60.0 / slow);
    let spacing = opts
        .spacing
        .unwrap_or_else(|| 0.005f64.min(0.025 / fast))
        .max(x_max / MAX_SAMPLES);
    Ok(Setup {
        m: endstate.rho() * endstate.u(),
        strength,
        regime,
        eig,
        x_max,
        spacing,
    })
}

impl StationaryWave {
    /// Integrate the boundary layer from `x = 0` and check it reaches the end state.
    pub fn solve(
        gas: GasModel,
        boundary: BoundaryData,
        endstate: FluidState,
        opts: &StationaryOptions,
    ) -> Result<Self, WaveError> {
        let s = setup(&gas, &boundary, &endstate, opts)?;
        if s.strength == 0.0 {
            return Ok(Self::constant(gas, endstate, s.regime, s.eig, s.x_max));
        }
        let integ = Integration {
            gas: &gas,
            endstate: &endstate,
            m: s.m,
            spacing: s.spacing,
            x_max: s.x_max,
            trust: opts.trust_factor * s.strength,
            solver: Dopri5 {
                rtol: opts.rtol,
                atol: opts.atol,
                ..Dopri5::default()
            },
        };
        let mut traj = integ.run([boundary.u_minus, boundary.theta_minus])?;
        let dist: Vec<f64> = traj
            .ys
            .iter()
            .map(|y| (y[0] - endstate.u()).hypot(y[1] - endstate.theta()))
            .collect();
        let last = *dist.last().unwrap();
        let (imin, dmin) = dist
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, d)| if d < acc.1 { (i, d) } else { acc });
        let terminal = if traj.escaped.is_none() && last <= opts.tol {
            last
        } else if dmin <= opts.tol {
            // saddle case: keep the part that shadows the stable curve
            traj.xs.truncate(imin + 1);
            traj.ys.truncate(imin + 1);
            traj.dys.truncate(imin + 1);
            dmin
        } else {
            let x = *traj.xs.last().unwrap();
            return Err(match traj.escaped {
                Some(Escape::SignChange) => WaveError::VelocitySignChange { x },
                Some(Escape::TrustRegion) => WaveError::Divergence { x, closest: dmin },
                None => WaveError::NotConverged {
                    distance: last,
                    tol: opts.tol,
                },
            });
        };
        if traj.xs.len() < 2 {
            return Err(WaveError::NotConverged {
                distance: dmin,
                tol: opts.tol,
            });
        }

        let us: Vec<f64> = traj.ys.iter().map(|y| y[0]).collect();
        let thetas: Vec<f64> = traj.ys.iter().map(|y| y[1]).collect();
        let u_interp = MonotoneCubic::with_slopes(
            traj.xs.clone(),
            us.clone(),
            traj.dys.iter().map(|d| d[0]).collect(),
        );
        let theta_interp = MonotoneCubic::with_slopes(
            traj.xs.clone(),
            thetas.clone(),
            traj.dys.iter().map(|d| d[1]).collect(),
        );
        let mut wave = Self {
            gas,
            boundary,
            endstate,
            mass_flux: s.m,
            regime: s.regime,
            spacing: s.spacing,
            xs: traj.xs,
            us,
            thetas,
            u_interp,
            theta_interp,
            terminal_distance: terminal,
            decay: None,
            eigenvalues: s.eig,
        };
        wave.decay = wave.fit_decay(&dist);
        Ok(wave)
    }

    fn constant(gas: GasModel, endstate: FluidState, regime: MachRegime, eig: (f64, f64), x_max: f64) -> Self {
        let xs = vec![0.0, x_max];
        let us = vec![endstate.u(); 2];
        let thetas = vec![endstate.theta(); 2];
        Self {
            gas,
            boundary: BoundaryData {
                u_minus: endstate.u(),
                theta_minus: endstate.theta(),
            },
            endstate,
            mass_flux: endstate.rho() * endstate.u(),
            regime,
            spacing: x_max,
            u_interp: MonotoneCubic::with_slopes(xs.clone(), us.clone(), vec![0.0; 2]),
            theta_interp: MonotoneCubic::with_slopes(xs.clone(), thetas.clone(), vec![0.0; 2]),
            xs,
            us,
            thetas,
            terminal_distance: 0.0,
            decay: None,
            eigenvalues: eig,
        }
    }

    fn fit_decay(&self, dist: &[f64]) -> Option<DecayEstimate> {
        let d0 = dist[0];
        if d0 == 0.0 {
            return None;
        }
        let (lo, hi) = self.eigenvalues;
        let x_settle = match self.regime {
            // both modes stable: wait for the fast one to die out
            MachRegime::Supersonic => 8.0 / (hi - lo),
            _ => 0.0,
        };
        let ratio = match self.regime {
            MachRegime::Transonic => 1e-1,
            _ => 1e-2,
        };
        let start = dist.iter().position(|&d| d <= ratio * d0)?;
        // near a truncated end the residual unstable mode bends the tail
        let floor = FIT_FLOOR.max(30.0 * self.terminal_distance);
        let mut fx = Vec::new();
        let mut fy = Vec::new();
        for i in start..self.xs.len() {
            let du = (self.us[i] - self.endstate.u()).abs();
            if self.xs[i] < x_settle || du <= 0.0 {
                continue;
            }
            if dist[i] < floor {
                break;
            }
            fy.push(du.ln());
            fx.push(match self.regime {
                MachRegime::Transonic => (1.0 + self.strength() * self.xs[i]).ln(),
                _ => self.xs[i],
            });
        }
        if fx.len() < 4 {
            return None;
        }
        let (a, b, r2) = linear_regression(&fx, &fy);
        let delta = self.strength();
        let model = match self.regime {
            MachRegime::Transonic => DecayModel::Algebraic {
                k: -b - 1.0,
                big_c: a.exp() / delta,
            },
            _ => DecayModel::Exponential {
                c: -b,
                big_c: a.exp() / delta,
            },
        };
        let x_of = |v: f64| match self.regime {
            MachRegime::Transonic => (v.exp() - 1.0) / delta,
            _ => v,
        };
        Some(DecayEstimate {
            model,
            r_squared: r2,
            samples: fx.len(),
            x_from: x_of(fx[0]),
            x_to: x_of(*fx.last().unwrap()),
        })
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    pub fn boundary(&self) -> BoundaryData {
        self.boundary
    }

    pub fn endstate(&self) -> FluidState {
        self.endstate
    }

    pub fn mass_flux(&self) -> f64 {
        self.mass_flux
    }

    pub fn regime(&self) -> MachRegime {
        self.regime
    }

    /// `|(u_m - u_-, theta_m - theta_-)|`.
    pub fn strength(&self) -> f64 {
        (self.endstate.u() - self.boundary.u_minus)
            .hypot(self.endstate.theta() - self.boundary.theta_minus)
    }

    pub fn is_zero_strength(&self) -> bool {
        self.strength() == 0.0
    }

    pub fn decay(&self) -> Option<&DecayEstimate> {
        self.decay.as_ref()
    }

    pub fn terminal_distance(&self) -> f64 {
        self.terminal_distance
    }

    /// Eigenvalues of the linearization at the end state.
    pub fn eigenvalues(&self) -> (f64, f64) {
        self.eigenvalues
    }

    /// End of the sampled profile; the end state is used beyond it.
    pub fn x_end(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// Spacing of the uniform output grid.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn samples(&self) -> (&[f64], &[f64], &[f64]) {
        (&self.xs, &self.us, &self.thetas)
    }

    /// Density samples, `m / u`.
    pub fn density_samples(&self) -> Vec<f64> {
        self.us.iter().map(|u| self.mass_flux / u).collect()
    }

    pub fn eval(&self, x: f64) -> FluidState {
        if self.is_zero_strength() || x >= self.x_end() {
            return self.endstate;
        }
        let x = x.max(0.0);
        let u = self.u_interp.eval(x);
        let theta = self.theta_interp.eval(x);
        FluidState {
            rho: self.mass_flux / u,
            u,
            theta,
        }
    }

    /// `(rho', u', theta')` of the interpolated profile.
    pub fn derivative(&self, x: f64) -> [f64; 3] {
        if self.is_zero_strength() || x >= self.x_end() || x < 0.0 {
            return [0.0; 3];
        }
        let u = self.u_interp.eval(x);
        let du = self.u_interp.derivative(x);
        [-self.mass_flux * du / (u * u), du, self.theta_interp.derivative(x)]
    }

    /// Max-norm residual of the unintegrated second-order stationary system,
    /// evaluated with fourth-order central differences on the sampled grid.
    pub fn second_order_residual(&self) -> f64 {
        let n = self.xs.len();
        if self.is_zero_strength() || n < 5 {
            return 0.0;
        }
        let h = self.spacing;
        let (gas, m) = (&self.gas, self.mass_flux);
        let r = gas.r();
        let flux_mom: Vec<f64> = self
            .us
            .iter()
            .zip(&self.thetas)
            .map(|(u, th)| m * u + r * m * th / u)
            .collect();
        let flux_en: Vec<f64> = self
            .us
            .iter()
            .zip(&self.thetas)
            .map(|(u, th)| m * (gas.cv() * th + 0.5 * u * u) + r * m * th)
            .collect();
        let half_u2: Vec<f64> = self.us.iter().map(|u| 0.5 * u * u).collect();
        let d1 = |f: &[f64], i: usize| {
            (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
        };
        let d2 = |f: &[f64], i: usize| {
            (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h)
        };
        (2..n - 2)
            .map(|i| {
                let mom = d1(&flux_mom, i) - gas.mu() * d2(&self.us, i);
                let en = d1(&flux_en, i) - gas.kappa() * d2(&self.thetas, i) - gas.mu() * d2(&half_u2, i);
                mom.abs().max(en.abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Signed unstable-mode component of the trajectory from `(u_minus, theta_minus)`.
fn shooting_functional(
    integ: &Integration<'_>,
    left_eig: [f64; 2],
    u_minus: f64,
    theta_minus: f64,
) -> Result<f64, WaveError> {
    let traj = integ.run([u_minus, theta_minus])?;
    let y = traj.ys.last().unwrap();
    Ok(left_eig[0] * (y[0] - integ.endstate.u()) + left_eig[1] * (y[1] - integ.endstate.theta()))
}

/// Locate `theta_-` on the stable curve through a subsonic end state, for the
/// given `u_-`, by bisection on the sign of the unstable component.
pub fn stationary_stable_boundary(
    gas: &GasModel,
    endstate: &FluidState,
    u_minus: f64,
    opts: &StationaryOptions,
) -> Result<f64, WaveError> {
    let mach = gas.mach(endstate);
    if classify(mach) != MachRegime::Subsonic {
        return Err(WaveError::ShootingUnnecessary { mach });
    }
    if !(endstate.u() < 0.0) {
        return Err(WaveError::NotOutflow(endstate.u()));
    }
    if u_minus == endstate.u() {
        return Ok(endstate.theta());
    }
    let delta0 = opts
        .delta0
        .unwrap_or(0.1 * endstate.u().abs().min(endstate.theta()));
    let du = (u_minus - endstate.u()).abs();
    if du >= delta0 {
        return Err(WaveError::OutsideNeighborhood {
            distance: du,
            radius: delta0,
        });
    }
    let half_width = 0.999 * (delta0 * delta0 - du * du).sqrt();

    let j = linearization(gas, endstate);
    let (_, unstable) = eigenvalues(&j);
    let left_eig = [unstable - j[1][1], j[0][1]];
    let slow = -eigenvalues(&j).0;
    let fast = unstable.abs().max(slow);
    let x_max = opts.x_max.unwrap_or(60.0 / slow);
    let spacing = opts
        .spacing
        .unwrap_or_else(|| 0.005f64.min(0.025 / fast))
        .max(x_max / MAX_SAMPLES);
    let integ_for = |theta_minus: f64| Integration {
        gas,
        endstate,
        m: endstate.rho() * endstate.u(),
        spacing,
        x_max,
        trust: opts.trust_factor * (endstate.u() - u_minus).hypot(endstate.theta() - theta_minus),
        solver: Dopri5 {
            rtol: opts.rtol,
            atol: opts.atol,
            ..Dopri5::default()
        },
    };
    let shoot = |theta: f64| shooting_functional(&integ_for(theta), left_eig, u_minus, theta);

    // scan outward from theta_m for the first sign change
    const SCAN: usize = 16;
    let theta_m = endstate.theta();
    let mut bracket = None;
    'scan: for side in [1.0, -1.0] {
        let mut prev_t = theta_m;
        let mut prev_s = shoot(theta_m)?;
        for i in 1..=SCAN {
            let t = theta_m + side * half_width * i as f64 / SCAN as f64;
            let s = shoot(t)?;
            if s == 0.0 {
                return Ok(t);
            }
            if s.signum() != prev_s.signum() {
                bracket = Some(if prev_t < t { (prev_t, prev_s, t) } else { (t, s, prev_t) });
                break 'scan;
            }
            prev_t = t;
            prev_s = s;
        }
    }
    let (mut lo, s_lo, mut hi) = bracket.ok_or(WaveError::NoSignChange)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = shoot(mid)?;
        if s == 0.0 {
            return Ok(mid);
        }
        if s.signum() == s_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
