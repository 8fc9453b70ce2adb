//! Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson).

/// Cubic Hermite interpolant whose slopes are limited so that it never
/// overshoots the data on any interval where the data is monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    /// Build from samples with known slopes; the slopes are limited where
    /// they would break monotonicity. `xs` must be strictly increasing.
    pub fn with_slopes(xs: Vec<f64>, ys: Vec<f64>, mut ds: Vec<f64>) -> Self {
        assert!(xs.len() >= 2 && xs.len() == ys.len() && ys.len() == ds.len());
        debug_assert!(xs.windows(2).all(|w| w[1] > w[0]));
        let n = xs.len();
        for k in 0..n - 1 {
            let secant = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
            if secant == 0.0 {
                ds[k] = 0.0;
                ds[k + 1] = 0.0;
                continue;
            }
            if ds[k] * secant < 0.0 {
                ds[k] = 0.0;
            }
            if ds[k + 1] * secant < 0.0 {
                ds[k + 1] = 0.0;
            }
            let a = ds[k] / secant;
            let b = ds[k + 1] / secant;
            let r2 = a * a + b * b;
            if r2 > 9.0 {
                let tau = 3.0 / r2.sqrt();
                ds[k] = tau * a * secant;
                ds[k + 1] = tau * b * secant;
            }
        }
        Self { xs, ys, ds }
    }

    /// Build from samples alone, with three-point slope estimates.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && n == ys.len());
        let secants: Vec<f64> = (0..n - 1)
            .map(|k| (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]))
            .collect();
        let mut ds = vec![0.0; n];
        ds[0] = secants[0];
        ds[n - 1] = secants[n - 2];
        for k in 1..n - 1 {
            ds[k] = if secants[k - 1] * secants[k] <= 0.0 {
                0.0
            } else {
                let h0 = xs[k] - xs[k - 1];
                let h1 = xs[k + 1] - xs[k];
                // weighted harmonic mean
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                (w0 + w1) / (w0 / secants[k - 1] + w1 / secants[k])
            };
        }
        Self::with_slopes(xs, ys, ds)
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    fn interval(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// Value at `x`, held constant outside the sampled range.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.x_max() {
            return *self.ys.last().unwrap();
        }
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let s = (x - self.xs[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.ys[k] + h10 * h * self.ds[k] + h01 * self.ys[k + 1] + h11 * h * self.ds[k + 1]
    }

    /// First derivative of the interpolant (zero outside the sampled range).
    pub fn derivative(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > self.x_max() {
            return 0.0;
        }
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let s = (x - self.xs[k]) / h;
        let s2 = s * s;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        d00 * self.ys[k] + d10 * self.ds[k] + d01 * self.ys[k + 1] + d11 * self.ds[k + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_cubics_with_exact_slopes() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let f = |x: f64| 0.5 * x * x * x + x;
        let df = |x: f64| 1.5 * x * x + 1.0;
        let ys = xs.iter().map(|&x| f(x)).collect();
        let ds = xs.iter().map(|&x| df(x)).collect();
        let p = MonotoneCubic::with_slopes(xs.clone(), ys, ds);
        for &x in &xs {
            assert!((p.eval(x) - f(x)).abs() < 1e-12);
        }
        for i in 0..100 {
            let x = i as f64 * 0.0571;
            assert!((p.eval(x) - f(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn no_overshoot_on_step_data() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys = vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let p = MonotoneCubic::new(xs, ys);
        for i in 0..=900 {
            let v = p.eval(i as f64 * 0.01);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn fourth_order_on_smooth_data() {
        let err = |n: usize| {
            let xs: Vec<f64> = (0..=n).map(|i| i as f64 * 4.0 / n as f64).collect();
            let ys = xs.iter().map(|&x| (-x).exp()).collect();
            let ds = xs.iter().map(|&x| -(-x).exp()).collect();
            let p = MonotoneCubic::with_slopes(xs, ys, ds);
            (0..1000)
                .map(|i| {
                    let x = i as f64 * 0.004 + 0.0013;
                    (p.eval(x) - (-x).exp()).abs()
                })
                .fold(0.0, f64::max)
        };
        let order = (err(20) / err(40)).log2();
        assert!(order > 3.8, "order {order}");
    }
}
