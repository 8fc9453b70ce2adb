//! Smooth and Riemann solutions of the inviscid Burgers equation
//! `w_t + w w_x = 0`.
//!
//! The smooth solution starts from the monotone profile
//!
//! ```text
//! w0(x) = w_- + (w_+ - w_-) k_q \int_0^{max(x,0)} z^q e^{-z} dz,   k_q = 1/q!
//! ```
//!
//! and is evaluated exactly by following characteristics back to their foot
//! point. Because `w0' >= 0` the characteristic map `x0 -> x0 + t w0(x0)` is
//! strictly increasing, so the foot point is found by bisection followed by a
//! Newton polish.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest smoothing exponent accepted for a profile.
pub const MIN_Q: u32 = 16;

const BRACKET_WIDTH: f64 = 1e-8;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BurgersError {
    #[error("profile requires w_minus <= w_plus, got {w_minus} > {w_plus}")]
    Ordering { w_minus: f64, w_plus: f64 },
    #[error("smoothing exponent q must be an integer >= {MIN_Q}, got {0}")]
    Exponent(u32),
    #[error("profile end values must be finite")]
    NonFinite,
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("Riemann solution needs t > 0, got {0}")]
    NonPositiveTime(f64),
    #[error("foot point not bracketed at (t = {t}, x = {x})")]
    Bracket { t: f64, x: f64 },
}

/// `ln(n!)` by direct summation; exact enough for the small `n` used here and
/// free of overflow.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `k_q` such that `k_q \int_0^inf z^q e^{-z} dz = 1`, i.e. `1/q!`.
pub fn normalization_constant(q: u32) -> f64 {
    (-ln_factorial(q)).exp()
}

/// Regularized lower incomplete gamma function `P(n, x)` for a positive
/// integer `n`.
///
/// Below `x = n` the convergent series is summed directly so that tiny values
/// keep full relative precision; above it `1 - Q(n, x)` with the finite sum
/// `Q(n, x) = e^{-x} sum_{k<n} x^k / k!`.
pub fn regularized_lower_gamma(n: u32, x: f64) -> f64 {
    debug_assert!(n >= 1);
    if x <= 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    if x < nf {
        // P(n, x) = x^n e^{-x} / n! * sum_{k>=0} x^k / ((n+1)...(n+k))
        let prefactor = (nf * x.ln() - x - ln_factorial(n)).exp();
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = nf;
        loop {
            k += 1.0;
            term *= x / k;
            sum += term;
            if term < sum * f64::EPSILON * 0.5 {
                break;
            }
        }
        (prefactor * sum).min(1.0)
    } else {
        if x > 700.0 {
            // e^{-x} underflows; log-space terms instead
            let q: f64 = (0..n)
                .map(|k| ((k as f64) * x.ln() - x - ln_factorial(k)).exp())
                .sum();
            return 1.0 - q;
        }
        let mut term = (-x).exp();
        let mut q = term;
        for k in 1..n {
            term *= x / k as f64;
            q += term;
        }
        (1.0 - q).max(0.0)
    }
}

/// Initial data of the smoothed Burgers problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurgersProfile {
    w_minus: f64,
    w_plus: f64,
    q: u32,
    #[serde(skip)]
    ln_kq: f64,
}

/// `(w, w_x, w_xx)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersValue {
    pub w: f64,
    pub w_x: f64,
    pub w_xx: f64,
}

impl BurgersProfile {
    pub fn new(w_minus: f64, w_plus: f64, q: u32) -> Result<Self, BurgersError> {
        if !(w_minus.is_finite() && w_plus.is_finite()) {
            return Err(BurgersError::NonFinite);
        }
        if w_minus > w_plus {
            return Err(BurgersError::Ordering { w_minus, w_plus });
        }
        if q < MIN_Q {
            return Err(BurgersError::Exponent(q));
        }
        Ok(Self {
            w_minus,
            w_plus,
            q,
            ln_kq: -ln_factorial(q),
        })
    }

    pub fn w_minus(&self) -> f64 {
        self.w_minus
    }

    pub fn w_plus(&self) -> f64 {
        self.w_plus
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Jump `w_+ - w_-`.
    pub fn strength(&self) -> f64 {
        self.w_plus - self.w_minus
    }

    pub fn initial_profile(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.w_minus;
        }
        self.w_minus + self.strength() * regularized_lower_gamma(self.q + 1, x)
    }

    /// `w0'(x) = (w_+ - w_-) k_q x^q e^{-x}` for `x > 0`, zero otherwise.
    pub fn initial_derivative(&self, x: f64) -> f64 {
        if x <= 0.0 || self.strength() == 0.0 {
            return 0.0;
        }
        self.strength() * (self.q as f64 * x.ln() - x + self.ln_kq).exp()
    }

    pub fn initial_second_derivative(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.initial_derivative(x) * (self.q as f64 / x - 1.0)
    }

    /// Foot point `x0` of the characteristic through `(t, x)`.
    pub fn foot_point(&self, t: f64, x: f64) -> Result<f64, BurgersError> {
        if !(t >= 0.0) {
            return Err(BurgersError::NegativeTime(t));
        }
        let hi = x - t * self.w_minus;
        if t == 0.0 || self.strength() == 0.0 || hi <= 0.0 {
            // characteristic starts where w0 = w_- (or data is constant)
            return Ok(hi);
        }
        let residual = |x0: f64| x0 + t * self.initial_profile(x0) - x;
        let mut lo = (x - t * self.w_plus).max(0.0);
        let mut hi = hi;
        let (r_lo, r_hi) = (residual(lo), residual(hi));
        if !(r_lo.is_finite() && r_hi.is_finite()) {
            return Err(BurgersError::Bracket { t, x });
        }
        // rounding can push an end-point residual across zero in the flat tails
        if r_hi <= 0.0 {
            return Ok(hi);
        }
        if r_lo >= 0.0 {
            return Ok(lo);
        }
        let mut iters = 0;
        while hi - lo > BRACKET_WIDTH && iters < MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if residual(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            iters += 1;
        }
        let mut x0 = 0.5 * (lo + hi);
        let mut r0 = residual(x0);
        for _ in 0..3 {
            let slope = 1.0 + t * self.initial_derivative(x0);
            let cand = (x0 - r0 / slope).max(0.0);
            let rc = residual(cand);
            if !(rc.abs() < r0.abs()) {
                break;
            }
            x0 = cand;
            r0 = rc;
        }
        let atol = 1e-12 * x.abs().max(1.0);
        debug_assert!(
            residual(x0).abs() <= atol.max(1e-13 * (x.abs() + t * self.w_minus.abs().max(self.w_plus.abs()))),
            "foot point residual {} at t={t}, x={x}",
            residual(x0)
        );
        Ok(x0)
    }

    /// Smooth solution `w(t, x)` and its derivative `w_x(t, x)`.
    pub fn exact_solution(&self, t: f64, x: f64) -> Result<(f64, f64), BurgersError> {
        let v = self.evaluate(t, x)?;
        Ok((v.w, v.w_x))
    }

    /// Smooth solution with first and second spatial derivatives.
    pub fn evaluate(&self, t: f64, x: f64) -> Result<BurgersValue, BurgersError> {
        let x0 = self.foot_point(t, x)?;
        if x0 <= 0.0 {
            return Ok(BurgersValue {
                w: self.w_minus,
                w_x: 0.0,
                w_xx: 0.0,
            });
        }
        let d1 = self.initial_derivative(x0);
        let d2 = self.initial_second_derivative(x0);
        let j = 1.0 + t * d1;
        Ok(BurgersValue {
            w: self.initial_profile(x0),
            w_x: d1 / j,
            w_xx: d2 / (j * j * j),
        })
    }
}

/// Centered rarefaction fan of the Riemann problem with data `w_-`, `w_+`.
pub fn riemann_solution(w_minus: f64, w_plus: f64, t: f64, x: f64) -> Result<f64, BurgersError> {
    if !(t > 0.0) {
        return Err(BurgersError::NonPositiveTime(t));
    }
    if w_minus > w_plus {
        return Err(BurgersError::Ordering { w_minus, w_plus });
    }
    Ok(if x <= w_minus * t {
        w_minus
    } else if x >= w_plus * t {
        w_plus
    } else {
        x / t
    })
}
