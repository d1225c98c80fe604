//! Monotone cubic interpolation (Fritsch–Carlson) on uniform grids.
//!
//! Used for every coordinate resampling in the crate: the limited Hermite
//! slopes never create new extrema, so an ordered family of profiles cannot
//! acquire spurious overshoots when moved between polar and logarithmic
//! coordinates.

/// Piecewise cubic Hermite interpolant with Fritsch–Carlson limited slopes.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x_lo: f64,
    h: f64,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// Fit over the uniform nodes `x_lo + i*h`, `i = 0..y.len()`.
    ///
    /// Needs at least two nodes; with exactly two it degenerates to the
    /// secant line.
    pub fn fit_uniform(x_lo: f64, h: f64, y: &[f64]) -> Self {
        assert!(y.len() >= 2, "need at least two nodes");
        assert!(h > 0.0, "spacing must be positive");
        let n = y.len();
        let mut delta = vec![0.0; n - 1];
        for i in 0..n - 1 {
            delta[i] = (y[i + 1] - y[i]) / h;
        }
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            d[0] = edge_slope(delta[0], delta[1]);
            d[n - 1] = edge_slope(delta[n - 2], delta[n - 3]);
            for i in 1..n - 1 {
                let (dl, dr) = (delta[i - 1], delta[i]);
                d[i] = if dl * dr <= 0.0 {
                    0.0
                } else {
                    // harmonic mean; equals the weighted three-point slope on
                    // uniform spacing and keeps each interval monotone
                    2.0 * dl * dr / (dl + dr)
                };
            }
        }
        MonotoneCubic { x_lo, h, y: y.to_vec(), d }
    }

    /// Evaluate at `x`; clamps to the end intervals outside the fitted range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let pos = (x - self.x_lo) / self.h;
        let k = (pos.floor() as isize).clamp(0, n as isize - 2) as usize;
        let s = pos - k as f64;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.y[k] * h00
            + self.h * self.d[k] * h10
            + self.y[k + 1] * h01
            + self.h * self.d[k + 1] * h11
    }
}

/// One-sided three-point end slope with the usual shape-preserving clamps.
fn edge_slope(d0: f64, d1: f64) -> f64 {
    let d = (3.0 * d0 - d1) / 2.0;
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_exactly() {
        let y = [1.0, 2.0, 0.5, 0.5, 3.0];
        let f = MonotoneCubic::fit_uniform(0.0, 0.5, &y);
        for (i, &yi) in y.iter().enumerate() {
            let x = 0.5 * i as f64;
            assert!((f.eval(x) - yi).abs() < 1e-14, "node {i}");
        }
    }

    #[test]
    fn linear_data_is_reproduced_exactly() {
        let y: Vec<f64> = (0..11).map(|i| 3.0 - 0.7 * i as f64).collect();
        let f = MonotoneCubic::fit_uniform(-1.0, 0.25, &y);
        for k in 0..100 {
            let x = -1.0 + 2.5 * k as f64 / 99.0;
            let exact = 3.0 - 0.7 * (x + 1.0) / 0.25;
            assert!((f.eval(x) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_data_stays_monotone() {
        // steep-then-flat data that classical cubic splines overshoot
        let y = [0.0, 0.01, 0.02, 1.0, 1.01, 1.02];
        let f = MonotoneCubic::fit_uniform(0.0, 1.0, &y);
        let mut prev = f.eval(0.0);
        for k in 1..=500 {
            let v = f.eval(5.0 * k as f64 / 500.0);
            assert!(v >= prev - 1e-12, "monotonicity lost at sample {k}");
            prev = v;
        }
        assert!(f.eval(3.5) <= 1.02 + 1e-12);
    }

    #[test]
    fn smooth_convergence_is_second_order() {
        // interpolation error for r^2 on shrinking spacing: order >= 1.9
        let mut errs = Vec::new();
        for lvl in 0..3 {
            let n = 20 * (1 << lvl) + 1;
            let h = 1.5 / (n - 1) as f64;
            let y: Vec<f64> = (0..n).map(|i| (0.5 + h * i as f64).powi(2)).collect();
            let f = MonotoneCubic::fit_uniform(0.5, h, &y);
            let mut e: f64 = 0.0;
            for k in 0..1000 {
                let x = 0.5 + 1.5 * k as f64 / 999.0;
                e = e.max((f.eval(x) - x * x).abs());
            }
            errs.push(e);
        }
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(order >= 1.9, "observed order {order:.2}, errors {errs:?}");
    }
}
