//! Power-law decay of smoothed-rarefaction derivatives in `L^p`.

use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::waves::stationary::linear_regression;
use crate::waves::RarefactionWave;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpNorm {
    One,
    Two,
    Infinity,
}

impl LpNorm {
    pub fn exponent(self) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Two => 2.0,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// Expected log-log slope `-1 + 1/p` of first-derivative norms.
    pub fn target_slope(self) -> f64 {
        -1.0 + 1.0 / self.exponent()
    }

    fn of(self, values: &[f64], h: f64) -> f64 {
        let n = values.len();
        match self {
            Self::Infinity => values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            Self::One => {
                let s: f64 = values.iter().map(|v| v.abs()).sum();
                h * (s - 0.5 * (values[0].abs() + values[n - 1].abs()))
            }
            Self::Two => {
                let s: f64 = values.iter().map(|v| v * v).sum();
                (h * (s - 0.5 * (values[0] * values[0] + values[n - 1] * values[n - 1]))).sqrt()
            }
        }
    }
}

/// `n` times spaced geometrically in `[t0, t1]`.
pub fn geometric_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let r = (t1 / t0).ln() / (n - 1) as f64;
    (0..n).map(|k| if k == n - 1 { t1 } else { t0 * (r * k as f64).exp() }).collect()
}

/// `L^p(0, X)` norm of `d^order u / dx^order` of the smoothed wave at time
/// `t`, by centered differences on `n` uniform points. `X` covers the whole
/// transition zone so the truncated tail is zero.
pub fn srw_derivative_norm(
    wave: &RarefactionWave,
    t: f64,
    order: u8,
    p: LpNorm,
    n: usize,
) -> Result<f64, DiagnosticsError> {
    assert!(order == 1 || order == 2, "derivative order must be 1 or 2");
    let prof = wave.profile();
    let q = prof.q() as f64;
    // w0 is within 1e-16 of w_+ beyond roughly 4q
    let x_max = 4.0 * q + 20.0 + (1.0 + t) * prof.w_plus().max(0.0);
    let h = x_max / (n - 1) as f64;
    let u: Vec<f64> = (0..n + 1)
        .map(|i| wave.smoothed_at(t, i as f64 * h).map(|s| s.u()))
        .collect::<Result<_, _>>()?;
    let d: Vec<f64> = match order {
        1 => {
            let mut d = Vec::with_capacity(n);
            d.push((u[1] - u[0]) / h);
            for i in 1..n {
                d.push((u[i + 1] - u[i - 1]) / (2.0 * h));
            }
            d
        }
        _ => {
            let mut d = Vec::with_capacity(n);
            for i in 1..n {
                d.push((u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h));
            }
            d.insert(0, d[0]);
            d
        }
    };
    Ok(p.of(&d, h))
}

/// Least-squares fit `ln ||.|| = a + b ln(1 + t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub p: LpNorm,
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn decay_fit(samples: &[(f64, f64)], p: LpNorm) -> Result<DecayFit, DiagnosticsError> {
    if samples.len() < 4 {
        return Err(DiagnosticsError::TooFewSamples(samples.len()));
    }
    if let Some(&(t, value)) = samples.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(DiagnosticsError::NonPositiveNorm { t, value });
    }
    let xs: Vec<f64> = samples.iter().map(|(t, _)| (1.0 + t).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, v)| v.ln()).collect();
    let (a, b, r2) = linear_regression(&xs, &ys);
    Ok(DecayFit {
        p,
        samples: samples.to_vec(),
        slope: b,
        intercept: a,
        r_squared: r2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{FluidState, GasModel};
    use crate::waves::RarefactionMode;

    #[test]
    fn fit_recovers_power_law() {
        let s: Vec<(f64, f64)> = geometric_times(10.0, 1000.0, 8)
            .into_iter()
            .map(|t| (t, 3.0 * (1.0 + t).powf(-0.5)))
            .collect();
        let f = decay_fit(&s, LpNorm::Two).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(decay_fit(&s[..3], LpNorm::Two).is_err());
        let mut bad = s.clone();
        bad[2].1 = 0.0;
        assert!(matches!(decay_fit(&bad, LpNorm::Two), Err(DiagnosticsError::NonPositiveNorm { .. })));
    }

    #[test]
    fn geometric_times_endpoints() {
        let ts = geometric_times(10.0, 1000.0, 8);
        assert_eq!(ts.len(), 8);
        assert_eq!(ts[0], 10.0);
        assert_eq!(ts[7], 1000.0);
        assert!((ts[1] / ts[0] - ts[2] / ts[1]).abs() < 1e-12);
    }

    #[test]
    fn l1_norm_is_total_variation() {
        let gas = GasModel::default();
        let right = FluidState::new(1.0, 1.0, 1.0).unwrap();
        let w = RarefactionWave::from_right(gas, right, 0.6, RarefactionMode::Smoothed, 16).unwrap();
        let t = 20.0;
        let l1 = srw_derivative_norm(&w, t, 1, LpNorm::One, 20_000).unwrap();
        let tv = right.u() - w.smoothed_at(t, 0.0).unwrap().u();
        assert!((l1 - tv).abs() < 1e-4 * tv, "{l1} vs {tv}");
    }

    /// sup_x |w_xx| at Burgers time s along characteristics: max over foot
    /// points x0 of |w0''(x0)| / (1 + s w0'(x0))^3, with w0' = jump x^q e^-x / q!.
    fn characteristic_sup_wxx(q: u32, jump: f64, s: f64) -> f64 {
        let ln_qf: f64 = (2..=q).map(|k| (k as f64).ln()).sum();
        let qf = q as f64;
        let g = |x: f64| {
            let d1 = jump * (qf * x.ln() - x - ln_qf).exp();
            (d1 * (qf / x - 1.0)).abs() / (1.0 + s * d1).powi(3)
        };
        let n = 400_000;
        let hi = 6.0 * qf;
        let step = hi / n as f64;
        let k = (1..n).max_by(|&a, &b| g(a as f64 * step).total_cmp(&g(b as f64 * step))).unwrap();
        // golden section on the bracketing cells
        let (mut a, mut b) = ((k - 1) as f64 * step, (k + 1) as f64 * step);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let (c, d) = (b - r * (b - a), a + r * (b - a));
            if g(c) > g(d) {
                b = d;
            } else {
                a = c;
            }
        }
        g(0.5 * (a + b))
    }

    #[test]
    fn second_derivative_slope_matches_characteristics() {
        let gas = GasModel::default();
        // u_- = -0.3 so that the whole wave moves into x > 0
        let u_plus = -0.3 + 5.0 * (1.4f64.sqrt() - 0.35f64.sqrt());
        let right = FluidState::new(1.0, u_plus, 1.0).unwrap();
        let w = RarefactionWave::from_right(gas, right, 0.25, RarefactionMode::Smoothed, 16).unwrap();
        assert!(w.profile().w_minus() > 0.0);
        let jump = w.profile().strength();
        let times = geometric_times(10.0, 1000.0, 8);
        let oracle: Vec<(f64, f64)> = times.iter().map(|&t| (t, characteristic_sup_wxx(16, jump, 1.0 + t))).collect();
        let measured: Vec<(f64, f64)> = times
            .iter()
            .map(|&t| (t, srw_derivative_norm(&w, t, 2, LpNorm::Infinity, 100_001).unwrap()))
            .collect();
        let expected = decay_fit(&oracle, LpNorm::Infinity).unwrap().slope;
        let got = decay_fit(&measured, LpNorm::Infinity).unwrap().slope;
        assert!((got - expected).abs() < 2e-3, "{got} vs {expected}");
        // the window is far from the asymptotic -1 + 1/q
        assert!(expected > -0.85, "{expected}");
    }
}
