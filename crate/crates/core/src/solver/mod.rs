//! Explicit finite-difference solver for the compressible Navier-Stokes
//! system on a truncated half-line `[0, L]`.
//!
//! Primitive form:
//!
//! ```text
//! rho_t + u rho_x + rho u_x = 0
//! rho (u_t + u u_x) + P_x = mu u_xx
//! c_v rho (theta_t + u theta_x) + P u_x = kappa theta_xx + mu u_x^2
//! ```
//!
//! `u` and `theta` are prescribed at `x = 0`, the density there follows the
//! continuity equation, and all three variables are taken from the target
//! pattern at `x = L`.

mod run;
mod scheme;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gas::{BoundaryData, FluidState, GasModel, ValidationError};
use crate::waves::{WaveError, WavePattern};

pub use run::{run, run_with, StepReport, Trajectory};
pub use scheme::{apply_boundary, cfl_timestep, rhs, step, step_with, Source};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("grid needs L > 0 and N >= 16, got L = {l}, N = {n}")]
    Grid { l: f64, n: usize },
    #[error("cfl number must lie in (0, 1), got {0}")]
    Cfl(f64),
    #[error("time control: {0}")]
    Time(String),
    #[error("inflow boundary u_- = {0} > 0 is not supported (outflow or wall only)")]
    Inflow(f64),
    #[error("perturbation: {0}")]
    Perturbation(String),
    #[error("initial {var} is not positive at x = {x}: {value}")]
    InitialPositivity { var: &'static str, x: f64, value: f64 },
    #[error("{var} lost positivity at node {node} (x = {x}), t = {t}: {value}")]
    Positivity {
        var: &'static str,
        node: usize,
        x: f64,
        t: f64,
        value: f64,
    },
    #[error("non-finite {var} at node {node}, step {step}, t = {t}")]
    NonFinite {
        var: &'static str,
        node: usize,
        step: usize,
        t: f64,
    },
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

impl SolverError {
    /// True for failures that happen while time stepping, as opposed to
    /// rejected input.
    pub fn is_runtime(&self) -> bool {
        matches!(self, Self::Positivity { .. } | Self::NonFinite { .. })
    }
}

/// Uniform grid `x_i = i h`, `i = 0..=N`, `h = L / N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    l: f64,
    n: usize,
}

impl Grid {
    pub fn new(l: f64, n: usize) -> Result<Self, SolverError> {
        if !(l > 0.0 && l.is_finite()) || n < 16 {
            return Err(SolverError::Grid { l, n });
        }
        Ok(Self { l, n })
    }

    pub fn length(&self) -> f64 {
        self.l
    }

    /// Number of cells; there are `N + 1` nodes.
    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.l / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.n {
            self.l
        } else {
            i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.x(i)).collect()
    }
}

/// Nodal values at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimField {
    pub t: f64,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

impl SimField {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn state(&self, i: usize) -> FluidState {
        FluidState {
            rho: self.rho[i],
            u: self.u[i],
            theta: self.theta[i],
        }
    }

    /// Sample a pattern on the grid at time `t`.
    pub fn from_pattern(pattern: &WavePattern, grid: &Grid, t: f64) -> Result<Self, WaveError> {
        let n = grid.cells() + 1;
        let mut f = Self {
            t,
            rho: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            theta: Vec::with_capacity(n),
        };
        for i in 0..n {
            let s = pattern.eval(t, grid.x(i))?;
            f.rho.push(s.rho());
            f.u.push(s.u());
            f.theta.push(s.theta());
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationShape {
    /// `A [exp(-((x-c)/w)^2) - exp(-(c/w)^2) exp(-(x/w)^2)]`, zero at `x = 0`.
    GaussianBump,
    /// `A cos^2(pi (x-c) / (2w))` on `|x - c| < w`; requires `c - w > 0`.
    CompactBump,
    None,
}

/// Initial disturbance added to the target pattern at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub shape: PerturbationShape,
    /// Amplitudes for `(rho, u, theta)`.
    pub amplitude: [f64; 3],
    pub center: f64,
    pub width: f64,
}

impl Perturbation {
    pub fn none() -> Self {
        Self {
            shape: PerturbationShape::None,
            amplitude: [0.0; 3],
            center: 0.0,
            width: 1.0,
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<(), SolverError> {
        if self.shape == PerturbationShape::None {
            return Ok(());
        }
        if !(self.width > 0.0 && self.width.is_finite()) || !self.center.is_finite() {
            return Err(SolverError::Perturbation(format!(
                "width must be positive and center finite, got width = {}, center = {}",
                self.width, self.center
            )));
        }
        if self.amplitude.iter().any(|a| !a.is_finite()) {
            return Err(SolverError::Perturbation("amplitudes must be finite".into()));
        }
        if self.shape == PerturbationShape::CompactBump && self.center - self.width <= 0.0 {
            return Err(SolverError::Perturbation(format!(
                "compact bump support [{}, {}] overlaps the boundary x = 0",
                self.center - self.width,
                self.center + self.width
            )));
        }
        let scale = self.profile(grid.length()).abs();
        if scale > 1e-6 {
            return Err(SolverError::Perturbation(format!(
                "bump has not decayed at x = L = {} (relative size {scale:e})",
                grid.length()
            )));
        }
        Ok(())
    }

    /// Unit-amplitude shape at `x`.
    pub fn profile(&self, x: f64) -> f64 {
        let (c, w) = (self.center, self.width);
        match self.shape {
            PerturbationShape::None => 0.0,
            PerturbationShape::GaussianBump => {
                let z = (x - c) / w;
                (-z * z).exp() - (-(c / w) * (c / w)).exp() * (-(x / w) * (x / w)).exp()
            }
            PerturbationShape::CompactBump => {
                if (x - c).abs() >= w {
                    0.0
                } else {
                    let a = (std::f64::consts::FRAC_PI_2 * (x - c) / w).cos();
                    a * a
                }
            }
        }
    }

    pub fn eval(&self, x: f64) -> [f64; 3] {
        let p = self.profile(x);
        [self.amplitude[0] * p, self.amplitude[1] * p, self.amplitude[2] * p]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeControl {
    pub t_end: f64,
    pub cfl: f64,
    pub max_steps: usize,
}

/// Everything needed to run one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    gas: GasModel,
    grid: Grid,
    target: WavePattern,
    perturbation: Perturbation,
    time: TimeControl,
    outputs: Vec<f64>,
}

impl Scenario {
    /// Validates the configuration, including positivity of the initial data.
    /// `outputs` are snapshot times; they are sorted, clipped to `[0, t_end]`
    /// and always include `0` and `t_end`.
    pub fn new(
        grid: Grid,
        target: WavePattern,
        perturbation: Perturbation,
        time: TimeControl,
        outputs: Vec<f64>,
    ) -> Result<Self, SolverError> {
        if !(time.cfl > 0.0 && time.cfl < 1.0) {
            return Err(SolverError::Cfl(time.cfl));
        }
        if !(time.t_end >= 0.0 && time.t_end.is_finite()) {
            return Err(SolverError::Time(format!("t_end must be finite and >= 0, got {}", time.t_end)));
        }
        let b = target.boundary();
        if b.u_minus > 0.0 {
            return Err(SolverError::Inflow(b.u_minus));
        }
        perturbation.validate(&grid)?;
        let mut outputs: Vec<f64> = outputs
            .into_iter()
            .filter(|t| t.is_finite() && *t >= 0.0 && *t <= time.t_end)
            .chain([0.0, time.t_end])
            .collect();
        outputs.sort_by(|a, b| a.total_cmp(b));
        outputs.dedup();
        let sc = Self {
            gas: *target.gas(),
            grid,
            target,
            perturbation,
            time,
            outputs,
        };
        sc.initial_field()?;
        Ok(sc)
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn target(&self) -> &WavePattern {
        &self.target
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    pub fn time(&self) -> &TimeControl {
        &self.time
    }

    pub fn outputs(&self) -> &[f64] {
        &self.outputs
    }

    pub fn boundary(&self) -> BoundaryData {
        self.target.boundary()
    }

    /// Target pattern at `t = 0` plus the perturbation.
    pub fn initial_field(&self) -> Result<SimField, SolverError> {
        let mut f = SimField::from_pattern(&self.target, &self.grid, 0.0)?;
        for i in 0..f.len() {
            let x = self.grid.x(i);
            let [dr, du, dt] = self.perturbation.eval(x);
            f.rho[i] += dr;
            f.u[i] += du;
            f.theta[i] += dt;
            if !(f.rho[i] > 0.0) {
                return Err(SolverError::InitialPositivity {
                    var: "rho",
                    x,
                    value: f.rho[i],
                });
            }
            if !(f.theta[i] > 0.0) {
                return Err(SolverError::InitialPositivity {
                    var: "theta",
                    x,
                    value: f.theta[i],
                });
            }
        }
        Ok(f)
    }

    /// `|target(t, L) - far field|`; large values mean the domain is too short.
    pub fn truncation_sentinel(&self, t: f64) -> Result<f64, WaveError> {
        let s = self.target.eval(t, self.grid.length())?;
        Ok(s.distance(&self.target.far_field()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_target() -> WavePattern {
        WavePattern::Constant {
            gas: GasModel::default(),
            state: FluidState::new(1.0, -0.5, 1.0).unwrap(),
        }
    }

    fn time() -> TimeControl {
        TimeControl {
            t_end: 1.0,
            cfl: 0.5,
            max_steps: 1000,
        }
    }

    #[test]
    fn grid_validation_and_nodes() {
        assert!(Grid::new(1.0, 15).is_err());
        assert!(Grid::new(0.0, 32).is_err());
        let g = Grid::new(3.0, 30).unwrap();
        assert_eq!(g.nodes().len(), 31);
        assert_eq!(g.x(30), 3.0);
        assert!((g.h() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn zero_amplitude_gives_target() {
        let grid = Grid::new(10.0, 50).unwrap();
        let sc = Scenario::new(grid, constant_target(), Perturbation::none(), time(), vec![]).unwrap();
        let f = sc.initial_field().unwrap();
        assert!(f.rho.iter().all(|&r| r == 1.0));
        assert_eq!(sc.outputs(), &[0.0, 1.0]);
    }

    #[test]
    fn gaussian_bump_in_density_only() {
        let grid = Grid::new(40.0, 400).unwrap();
        let p = Perturbation {
            shape: PerturbationShape::GaussianBump,
            amplitude: [0.3, 0.0, 0.0],
            center: 10.0,
            width: 2.0,
        };
        let sc = Scenario::new(grid, constant_target(), p, time(), vec![]).unwrap();
        let f = sc.initial_field().unwrap();
        assert_eq!(f.rho[0], 1.0);
        assert!((f.rho[100] - 1.3).abs() < 1e-12);
        assert!(f.u.iter().all(|&u| u == -0.5));
        assert!(f.theta.iter().all(|&t| t == 1.0));
    }

    #[test]
    fn gaussian_bump_vanishes_at_boundary_even_when_wide() {
        let p = Perturbation {
            shape: PerturbationShape::GaussianBump,
            amplitude: [1.0; 3],
            center: 1.0,
            width: 3.0,
        };
        assert!(p.profile(0.0).abs() < 1e-16);
        assert!(p.profile(1.0) > 0.0);
    }

    #[test]
    fn compact_bump_overlapping_boundary_rejected() {
        let grid = Grid::new(40.0, 400).unwrap();
        let p = Perturbation {
            shape: PerturbationShape::CompactBump,
            amplitude: [0.1, 0.0, 0.0],
            center: 1.0,
            width: 2.0,
        };
        assert!(matches!(
            Scenario::new(grid, constant_target(), p, time(), vec![]),
            Err(SolverError::Perturbation(_))
        ));
    }

    #[test]
    fn undecayed_bump_and_negative_density_rejected() {
        let grid = Grid::new(10.0, 100).unwrap();
        let wide = Perturbation {
            shape: PerturbationShape::GaussianBump,
            amplitude: [0.1, 0.0, 0.0],
            center: 8.0,
            width: 2.0,
        };
        assert!(Scenario::new(grid, constant_target(), wide, time(), vec![]).is_err());
        let deep = Perturbation {
            shape: PerturbationShape::CompactBump,
            amplitude: [-1.5, 0.0, 0.0],
            center: 4.0,
            width: 1.0,
        };
        assert!(matches!(
            Scenario::new(grid, constant_target(), deep, time(), vec![]),
            Err(SolverError::InitialPositivity { var: "rho", .. })
        ));
    }

    #[test]
    fn inflow_and_bad_cfl_rejected() {
        let grid = Grid::new(10.0, 100).unwrap();
        let inflow = WavePattern::Constant {
            gas: GasModel::default(),
            state: FluidState::new(1.0, 0.5, 1.0).unwrap(),
        };
        assert!(matches!(
            Scenario::new(grid, inflow, Perturbation::none(), time(), vec![]),
            Err(SolverError::Inflow(_))
        ));
        let mut t = time();
        t.cfl = 1.0;
        assert!(matches!(
            Scenario::new(grid, constant_target(), Perturbation::none(), t, vec![]),
            Err(SolverError::Cfl(_))
        ));
    }
}
