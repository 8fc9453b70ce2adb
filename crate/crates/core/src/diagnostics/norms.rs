//! Perturbation fields, discrete Sobolev norms and sup-distances.

use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::solver::{Grid, SimField};
use crate::waves::WavePattern;

/// `(phi, psi, vartheta) = (rho, u, theta) - reference` at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationField {
    pub t: f64,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub vartheta: Vec<f64>,
}

impl PerturbationField {
    pub fn new(field: &SimField, grid: &Grid, reference: &WavePattern) -> Result<Self, DiagnosticsError> {
        check_len(field.len(), grid)?;
        let mut pf = Self {
            t: field.t,
            phi: Vec::with_capacity(field.len()),
            psi: Vec::with_capacity(field.len()),
            vartheta: Vec::with_capacity(field.len()),
        };
        for i in 0..field.len() {
            let r = reference.eval(field.t, grid.x(i))?;
            pf.phi.push(field.rho[i] - r.rho());
            pf.psi.push(field.u[i] - r.u());
            pf.vartheta.push(field.theta[i] - r.theta());
        }
        Ok(pf)
    }

    pub fn components(&self) -> [&[f64]; 3] {
        [&self.phi, &self.psi, &self.vartheta]
    }
}

fn check_len(n: usize, grid: &Grid) -> Result<(), DiagnosticsError> {
    if n != grid.cells() + 1 {
        return Err(DiagnosticsError::LengthMismatch {
            got: n,
            expected: grid.cells() + 1,
        });
    }
    Ok(())
}

/// Per-component `[phi, psi, vartheta]` norms plus combined values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentNorms {
    pub l2: [f64; 3],
    pub h1: [f64; 3],
    pub sup: [f64; 3],
    pub l2_total: f64,
    pub h1_total: f64,
    /// Max over nodes of the Euclidean norm of the triple.
    pub sup_total: f64,
}

fn trapezoid_sq(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    let inner: f64 = f.iter().map(|v| v * v).sum();
    h * (inner - 0.5 * (f[0] * f[0] + f[n - 1] * f[n - 1]))
}

/// Centered differences inside, one-sided at the two ends.
fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    d[0] = (f[1] - f[0]) / h;
    d[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d
}

pub fn perturbation_norms(pf: &PerturbationField, grid: &Grid) -> Result<ComponentNorms, DiagnosticsError> {
    let h = grid.h();
    let mut out = ComponentNorms {
        l2: [0.0; 3],
        h1: [0.0; 3],
        sup: [0.0; 3],
        l2_total: 0.0,
        h1_total: 0.0,
        sup_total: 0.0,
    };
    for (k, c) in pf.components().into_iter().enumerate() {
        check_len(c.len(), grid)?;
        let l2sq = trapezoid_sq(c, h);
        let d = derivative(c, h);
        let h1sq = l2sq + trapezoid_sq(&d, h);
        out.l2[k] = l2sq.sqrt();
        out.h1[k] = h1sq.sqrt();
        out.sup[k] = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        out.l2_total += l2sq;
        out.h1_total += h1sq;
    }
    out.l2_total = out.l2_total.sqrt();
    out.h1_total = out.h1_total.sqrt();
    out.sup_total = (0..pf.phi.len())
        .map(|i| euclid(pf.phi[i], pf.psi[i], pf.vartheta[i]))
        .fold(0.0, f64::max);
    Ok(out)
}

#[inline]
fn euclid(a: f64, b: f64, c: f64) -> f64 {
    (a * a + b * b + c * c).sqrt()
}

/// `max_i |(rho, u, theta)_i - pattern(t, x_i)|` with `t = field.t`.
pub fn sup_distance(field: &SimField, grid: &Grid, pattern: &WavePattern) -> Result<f64, DiagnosticsError> {
    check_len(field.len(), grid)?;
    let mut m = 0.0f64;
    for i in 0..field.len() {
        let r = pattern.eval(field.t, grid.x(i))?;
        m = m.max(euclid(field.rho[i] - r.rho(), field.u[i] - r.u(), field.theta[i] - r.theta()));
    }
    Ok(m)
}

/// Largest perturbation magnitude over the last 5% of nodes.
pub fn tail_sentinel(pf: &PerturbationField) -> f64 {
    let n = pf.phi.len();
    let start = n - (n / 20).max(1);
    (start..n)
        .map(|i| euclid(pf.phi[i], pf.psi[i], pf.vartheta[i]))
        .fold(0.0, f64::max)
}
