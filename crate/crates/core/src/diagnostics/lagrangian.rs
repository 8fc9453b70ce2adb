//! Lagrangian mass coordinate `y = Y(t) + int_0^x rho dz` with moving
//! boundary `Y(t) = -u_- int_0^t rho(s, 0) ds`, and cell integrals of the
//! specific volume `v = 1/rho` and temperature over unit mass cells.

use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::solver::{Grid, SimField};

/// `Y(t)` from the `(t, rho(t, 0))` trace recorded by the solver.
pub fn lagrangian_boundary(trace: &[[f64; 2]], u_minus: f64, t: f64) -> Result<f64, DiagnosticsError> {
    let t_max = trace.last().map_or(0.0, |p| p[0]);
    if !(t >= 0.0) || t > t_max * (1.0 + 1e-14) {
        return Err(DiagnosticsError::TimeOutOfRange { t, t_max });
    }
    let mut integral = 0.0;
    for w in trace.windows(2) {
        let ([t0, r0], [t1, r1]) = (w[0], w[1]);
        if t1 <= t {
            integral += 0.5 * (r0 + r1) * (t1 - t0);
        } else {
            if t > t0 {
                let r = r0 + (r1 - r0) * (t - t0) / (t1 - t0);
                integral += 0.5 * (r0 + r) * (t - t0);
            }
            break;
        }
    }
    Ok(-u_minus * integral)
}

/// Mass coordinate of every node at time `field.t`.
pub fn lagrangian_nodes(
    trace: &[[f64; 2]],
    u_minus: f64,
    field: &SimField,
    grid: &Grid,
) -> Result<Vec<f64>, DiagnosticsError> {
    let big_y = lagrangian_boundary(trace, u_minus, field.t)?;
    let h = grid.h();
    let mut ys = Vec::with_capacity(field.len());
    let mut y = big_y;
    ys.push(y);
    for w in field.rho.windows(2) {
        y += 0.5 * h * (w[0] + w[1]);
        ys.push(y);
    }
    Ok(ys)
}

/// `(y, Y(t))` at position `x`.
pub fn lagrangian_coordinate(
    trace: &[[f64; 2]],
    u_minus: f64,
    field: &SimField,
    grid: &Grid,
    x: f64,
) -> Result<(f64, f64), DiagnosticsError> {
    let big_y = lagrangian_boundary(trace, u_minus, field.t)?;
    let h = grid.h();
    let x = x.clamp(0.0, grid.length());
    let mut y = big_y;
    let full = ((x / h).floor() as usize).min(grid.cells());
    for i in 0..full {
        y += 0.5 * h * (field.rho[i] + field.rho[i + 1]);
    }
    let rest = x - full as f64 * h;
    if rest > 0.0 && full < grid.cells() {
        let r_end = field.rho[full] + (field.rho[full + 1] - field.rho[full]) * rest / h;
        y += 0.5 * rest * (field.rho[full] + r_end);
    }
    Ok((y, big_y))
}

/// Integrals over one mass cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub index: i64,
    pub y_start: f64,
    pub y_end: f64,
    pub int_v: f64,
    pub int_theta: f64,
    pub v_range: (f64, f64),
    pub theta_range: (f64, f64),
    /// Point where `v` equals its cell average.
    pub a: f64,
    /// Point where `theta` equals its cell average.
    pub b: f64,
}

struct Linear<'a> {
    xs: &'a [f64],
    ys: &'a [f64],
}

impl Linear<'_> {
    fn at(&self, j: usize, x: f64) -> f64 {
        let (x0, x1) = (self.xs[j], self.xs[j + 1]);
        self.ys[j] + (self.ys[j + 1] - self.ys[j]) * (x - x0) / (x1 - x0)
    }

    /// Segments `(j, c, d)` of `[a, b]` within node interval `j`.
    fn pieces(&self, a: f64, b: f64) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let start = self.xs.partition_point(|&x| x <= a).saturating_sub(1);
        (start..self.xs.len() - 1).map_while(move |j| {
            let c = self.xs[j].max(a);
            let d = self.xs[j + 1].min(b);
            (c < b).then_some((j, c, d))
        })
    }

    fn integral(&self, a: f64, b: f64) -> f64 {
        self.pieces(a, b)
            .map(|(j, c, d)| 0.5 * (d - c) * (self.at(j, c) + self.at(j, d)))
            .sum()
    }

    fn range(&self, a: f64, b: f64) -> (f64, f64) {
        self.pieces(a, b).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (j, c, d)| {
            let (p, q) = (self.at(j, c), self.at(j, d));
            (lo.min(p).min(q), hi.max(p).max(q))
        })
    }

    fn crossing(&self, a: f64, b: f64, level: f64) -> f64 {
        for (j, c, d) in self.pieces(a, b) {
            let (p, q) = (self.at(j, c) - level, self.at(j, d) - level);
            if p == 0.0 {
                return c;
            }
            if p * q <= 0.0 {
                return c + (d - c) * p / (p - q);
            }
        }
        // rounding left the average just outside the sampled range
        a
    }
}

/// Cells `[Y, [Y]+2]` then `[i, i+1]` up to the last complete cell inside the
/// domain. `ys` are the nodal mass coordinates from [`lagrangian_nodes`].
pub fn cell_entropy_averages(
    field: &SimField,
    grid: &Grid,
    ys: &[f64],
) -> Result<Vec<CellReport>, DiagnosticsError> {
    if ys.len() != field.len() || field.len() != grid.cells() + 1 {
        return Err(DiagnosticsError::LengthMismatch {
            got: ys.len(),
            expected: grid.cells() + 1,
        });
    }
    let v: Vec<f64> = field.rho.iter().map(|r| 1.0 / r).collect();
    let fv = Linear { xs: ys, ys: &v };
    let ft = Linear { xs: ys, ys: &field.theta };
    let xs = grid.nodes();
    let x_of = Linear { xs: ys, ys: &xs };
    let big_y = ys[0];
    let y_max = *ys.last().unwrap();
    let base = big_y.floor() as i64;

    let mut cells = Vec::new();
    let mut index = base + 1;
    let (mut a, mut b) = (big_y, (base + 2) as f64);
    while b <= y_max {
        let x_len = {
            let ja = ys.partition_point(|&y| y <= a).saturating_sub(1).min(ys.len() - 2);
            let jb = ys.partition_point(|&y| y <= b).saturating_sub(1).min(ys.len() - 2);
            x_of.at(jb, b) - x_of.at(ja, a)
        };
        if x_len < 2.0 * grid.h() {
            return Err(DiagnosticsError::DegenerateCell { index, width: x_len });
        }
        let int_v = fv.integral(a, b);
        let int_theta = ft.integral(a, b);
        cells.push(CellReport {
            index,
            y_start: a,
            y_end: b,
            int_v,
            int_theta,
            v_range: fv.range(a, b),
            theta_range: ft.range(a, b),
            a: fv.crossing(a, b, int_v / (b - a)),
            b: ft.crossing(a, b, int_theta / (b - a)),
        });
        index += 1;
        a = b;
        b += 1.0;
    }
    Ok(cells)
}
