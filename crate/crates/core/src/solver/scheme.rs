//! Spatial discretization, boundary treatment and the Heun time step.

use super::{Grid, Scenario, SimField, SolverError};
use crate::gas::{BoundaryData, FluidState, GasModel};
use crate::waves::{WaveError, WavePattern};

/// Extra forcing `(S_rho, S_u, S_theta)(t, x)` added to the time derivatives.
pub type Source<'a> = dyn Fn(f64, f64) -> [f64; 3] + 'a;

/// Data imposed at the two ends of the domain.
pub trait BoundarySource {
    /// `(u_-, theta_-)` at `x = 0`.
    fn left(&self) -> BoundaryData;
    /// Full state at the far end.
    fn right(&self, t: f64, x: f64) -> Result<FluidState, WaveError>;
}

impl BoundarySource for WavePattern {
    fn left(&self) -> BoundaryData {
        self.boundary()
    }

    fn right(&self, t: f64, x: f64) -> Result<FluidState, WaveError> {
        self.eval(t, x)
    }
}

/// `dt = cfl min(h / max(|u| + c), h^2 / (2 max(mu / rho_min, kappa / (c_v rho_min))))`.
pub fn cfl_timestep(gas: &GasModel, h: f64, cfl: f64, f: &SimField) -> f64 {
    let mut wave = 0.0f64;
    let mut rho_min = f64::INFINITY;
    for i in 0..f.len() {
        wave = wave.max(f.u[i].abs() + gas.sound_speed(f.theta[i]));
        rho_min = rho_min.min(f.rho[i]);
    }
    let diff = (gas.mu() / rho_min).max(gas.kappa() / (gas.cv() * rho_min));
    cfl * (h / wave).min(h * h / (2.0 * diff))
}

/// Time derivatives of all nodal values. Entries for Dirichlet data (`u`,
/// `theta` at node 0 and everything at node `N`) are zero.
pub fn rhs(gas: &GasModel, grid: &Grid, f: &SimField, source: Option<&Source<'_>>, out: &mut [Vec<f64>; 3]) {
    let n = f.len() - 1;
    let h = grid.h();
    let (r, mu, kappa, cv) = (gas.r(), gas.mu(), gas.kappa(), gas.cv());
    let (rho, u, th) = (&f.rho, &f.u, &f.theta);
    for o in out.iter_mut() {
        o.resize(n + 1, 0.0);
    }
    let [d_rho, d_u, d_th] = out;

    // one-sided continuity at the outflow boundary
    d_rho[0] = -u[0] * (rho[1] - rho[0]) / h - rho[0] * (u[1] - u[0]) / h;
    d_u[0] = 0.0;
    d_th[0] = 0.0;

    let inv_2h = 0.5 / h;
    let inv_h2 = 1.0 / (h * h);
    for i in 1..n {
        let (rl, rc, rr) = (rho[i - 1], rho[i], rho[i + 1]);
        let (ul, uc, ur) = (u[i - 1], u[i], u[i + 1]);
        let (tl, tc, tr) = (th[i - 1], th[i], th[i + 1]);
        let (rho_x, u_x_up, th_x) = if uc > 0.0 {
            ((rc - rl) / h, (uc - ul) / h, (tc - tl) / h)
        } else {
            ((rr - rc) / h, (ur - uc) / h, (tr - tc) / h)
        };
        let u_x = (ur - ul) * inv_2h;
        let p_x = r * (rr * tr - rl * tl) * inv_2h;
        let u_xx = (ur - 2.0 * uc + ul) * inv_h2;
        let th_xx = (tr - 2.0 * tc + tl) * inv_h2;
        let p = r * rc * tc;
        d_rho[i] = -uc * rho_x - rc * u_x;
        d_u[i] = -uc * u_x_up + (mu * u_xx - p_x) / rc;
        d_th[i] = -uc * th_x + (kappa * th_xx + mu * u_x * u_x - p * u_x) / (cv * rc);
    }
    d_rho[n] = 0.0;
    d_u[n] = 0.0;
    d_th[n] = 0.0;

    if let Some(src) = source {
        for i in 0..n {
            let s = src(f.t, grid.x(i));
            d_rho[i] += s[0];
            if i > 0 {
                d_u[i] += s[1];
                d_th[i] += s[2];
            }
        }
    }
}

/// Impose `u_-`, `theta_-` at node 0 and the far-field state at node `N`.
pub fn apply_boundary(bc: &dyn BoundarySource, grid: &Grid, f: &mut SimField) -> Result<(), WaveError> {
    let left = bc.left();
    f.u[0] = left.u_minus;
    f.theta[0] = left.theta_minus;
    let n = f.len() - 1;
    let s = bc.right(f.t, grid.length())?;
    f.rho[n] = s.rho();
    f.u[n] = s.u();
    f.theta[n] = s.theta();
    Ok(())
}

fn check(f: &SimField, grid: &Grid, step: usize) -> Result<(), SolverError> {
    for i in 0..f.len() {
        for (var, v) in [("rho", f.rho[i]), ("u", f.u[i]), ("theta", f.theta[i])] {
            if !v.is_finite() {
                return Err(SolverError::NonFinite {
                    var,
                    node: i,
                    step,
                    t: f.t,
                });
            }
        }
        for (var, v) in [("rho", f.rho[i]), ("theta", f.theta[i])] {
            if v <= 0.0 {
                return Err(SolverError::Positivity {
                    var,
                    node: i,
                    x: grid.x(i),
                    t: f.t,
                    value: v,
                });
            }
        }
    }
    Ok(())
}

/// Work buffers reused across steps.
#[derive(Debug, Default)]
pub(crate) struct Workspace {
    k1: [Vec<f64>; 3],
    k2: [Vec<f64>; 3],
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn heun_in_place(
    gas: &GasModel,
    grid: &Grid,
    bc: &dyn BoundarySource,
    source: Option<&Source<'_>>,
    f: &mut SimField,
    stage: &mut SimField,
    ws: &mut Workspace,
    dt: f64,
    step_index: usize,
) -> Result<(), SolverError> {
    rhs(gas, grid, f, source, &mut ws.k1);
    stage.t = f.t + dt;
    let n = f.len();
    for (dst, (src, k)) in [
        (&mut stage.rho, (&f.rho, &ws.k1[0])),
        (&mut stage.u, (&f.u, &ws.k1[1])),
        (&mut stage.theta, (&f.theta, &ws.k1[2])),
    ] {
        dst.resize(n, 0.0);
        for i in 0..n {
            dst[i] = src[i] + dt * k[i];
        }
    }
    apply_boundary(bc, grid, stage)?;
    check(stage, grid, step_index)?;
    rhs(gas, grid, stage, source, &mut ws.k2);
    for (dst, (k1, k2)) in [
        (&mut f.rho, (&ws.k1[0], &ws.k2[0])),
        (&mut f.u, (&ws.k1[1], &ws.k2[1])),
        (&mut f.theta, (&ws.k1[2], &ws.k2[2])),
    ] {
        for i in 0..n {
            dst[i] += 0.5 * dt * (k1[i] + k2[i]);
        }
    }
    f.t = stage.t;
    apply_boundary(bc, grid, f)?;
    check(f, grid, step_index)
}

/// One Heun step with explicit boundary data and optional forcing.
pub fn step_with(
    gas: &GasModel,
    grid: &Grid,
    bc: &dyn BoundarySource,
    source: Option<&Source<'_>>,
    f: &SimField,
    dt: f64,
) -> Result<SimField, SolverError> {
    let mut next = f.clone();
    let mut stage = f.clone();
    let mut ws = Workspace::default();
    heun_in_place(gas, grid, bc, source, &mut next, &mut stage, &mut ws, dt, 0)?;
    Ok(next)
}

/// One Heun step of a scenario.
pub fn step(sc: &Scenario, f: &SimField, dt: f64) -> Result<SimField, SolverError> {
    step_with(sc.gas(), sc.grid(), sc.target(), None, f, dt)
}
