//! Dormand-Prince 5(4) embedded Runge-Kutta integrator with step-size control.
//!
//! Only what the stationary boundary-layer construction needs: fixed-size
//! real state, forward or backward integration, a step cap, and an observer
//! called after every accepted step that may stop the integration.

use std::ops::ControlFlow;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: f64 },
    #[error("non-finite state at x = {x}")]
    NonFinite { x: f64 },
    #[error("too many steps ({steps}) before reaching x = {x_end}")]
    TooManySteps { steps: usize, x_end: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step magnitude allowed.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome<const N: usize> {
    pub x: f64,
    pub y: [f64; N],
    pub steps: usize,
    /// True when the observer requested the stop.
    pub stopped: bool,
}

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*, the embedded error weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl Dopri5 {
    /// Integrate `y' = f(x, y)` from `x0` to `x_end` (either direction).
    ///
    /// `observe(x, y, y')` runs at the start point and after each accepted
    /// step; returning `ControlFlow::Break` ends the integration early.
    pub fn integrate<const N: usize, F, O>(
        &self,
        mut f: F,
        x0: f64,
        y0: [f64; N],
        x_end: f64,
        mut observe: O,
    ) -> Result<Outcome<N>, OdeError>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N], &[f64; N]) -> ControlFlow<()>,
    {
        let dir = if x_end >= x0 { 1.0 } else { -1.0 };
        let mut x = x0;
        let mut y = y0;
        let mut k1 = f(x, &y);
        if observe(x, &y, &k1).is_break() {
            return Ok(Outcome { x, y, steps: 0, stopped: true });
        }
        let span = (x_end - x0).abs();
        if span == 0.0 {
            return Ok(Outcome { x, y, steps: 0, stopped: false });
        }
        let mut h = self.initial_step(&y, &k1).min(self.h_max).min(span);
        let mut steps = 0;
        let mut err_prev: f64 = 1e-4;

        while dir * (x_end - x) > 0.0 {
            if steps >= self.max_steps {
                return Err(OdeError::TooManySteps { steps, x_end });
            }
            let remaining = (x_end - x).abs();
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h < 1e-14 * x.abs().max(1.0) {
                return Err(OdeError::StepUnderflow { x });
            }
            let hs = dir * h;
            let k2 = f(x + C2 * hs, &axpy(&y, &[(A21, &k1)], hs));
            let k3 = f(x + C3 * hs, &axpy(&y, &[(A31, &k1), (A32, &k2)], hs));
            let k4 = f(x + C4 * hs, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], hs));
            let k5 = f(
                x + C5 * hs,
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], hs),
            );
            let k6 = f(
                x + hs,
                &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], hs),
            );
            let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], hs);
            let k7 = f(x + hs, &y_new);

            let mut err = 0.0;
            for i in 0..N {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc) * (e / sc);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                // retry smaller before giving up
                h *= 0.2;
                if h < 1e-14 * x.abs().max(1.0) {
                    return Err(OdeError::NonFinite { x });
                }
                continue;
            }

            if err <= 1.0 {
                x = if last { x_end } else { x + hs };
                y = y_new;
                k1 = k7;
                steps += 1;
                // PI step-size controller
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0)).clamp(0.2, 5.0)
                };
                err_prev = err.max(1e-4);
                h = (h * fac).min(self.h_max);
                if observe(x, &y, &k1).is_break() {
                    return Ok(Outcome { x, y, steps, stopped: true });
                }
            } else {
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        Ok(Outcome { x, y, steps, stopped: false })
    }

    fn initial_step<const N: usize>(&self, y: &[f64; N], dy: &[f64; N]) -> f64 {
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y[i].abs();
            d0 = d0.max((y[i] / sc).abs());
            d1 = d1.max((dy[i] / sc).abs());
        }
        if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            (0.01 * d0 / d1).max(1e-10)
        }
    }
}
