//! Piecewise-cubic interpolants over strictly increasing knots.

use crate::{Error, Result};

fn validate_knots(x: &[f64], y: &[f64], min_len: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::param("knot and value arrays differ in length"));
    }
    if x.len() < min_len {
        return Err(Error::param(format!("need at least {min_len} knots, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::param("knots and values must be finite"));
    }
    if x.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("knots must be strictly increasing"));
    }
    Ok(())
}

/// Index `i` with `x[i] <= t <= x[i+1]`, clamped to the end intervals.
fn locate(x: &[f64], t: f64) -> usize {
    let last = x.len() - 2;
    match x.partition_point(|&k| k <= t) {
        0 => 0,
        p => (p - 1).min(last),
    }
}

/// Natural cubic spline (zero second derivative at both ends).
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        validate_knots(&x, &y, 3)?;
        let n = x.len();
        let mut m = vec![0.0; n];

        // Tridiagonal system for the interior second derivatives (Thomas algorithm).
        let inner = n - 2;
        let mut diag = vec![0.0; inner];
        let mut rhs = vec![0.0; inner];
        let mut upper = vec![0.0; inner];
        for i in 0..inner {
            let h0 = x[i + 1] - x[i];
            let h1 = x[i + 2] - x[i + 1];
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
        }
        for i in 1..inner {
            let lower = x[i + 1] - x[i];
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for i in (0..inner).rev() {
            let next = if i + 1 < inner { m[i + 2] } else { 0.0 };
            m[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn start(&self) -> f64 {
        self.x[0]
    }

    pub fn end(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    fn segment(&self, t: f64) -> (usize, f64, f64, f64) {
        let i = locate(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (i, h, a, b)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (i, h, a, b) = self.segment(t);
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let (i, h, a, b) = self.segment(t);
        (self.y[i + 1] - self.y[i]) / h
            + ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        let (i, _, a, b) = self.segment(t);
        a * self.m[i] + b * self.m[i + 1]
    }
}

/// Fritsch-Carlson monotone cubic Hermite interpolant: preserves monotonicity
/// of the data between knots.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        validate_knots(&x, &y, 2)?;
        let n = x.len();
        let secants: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();

        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            slopes[i] = if secants[i - 1] * secants[i] <= 0.0 {
                0.0
            } else {
                0.5 * (secants[i - 1] + secants[i])
            };
        }
        for i in 0..n - 1 {
            if secants[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let alpha = slopes[i] / secants[i];
            let beta = slopes[i + 1] / secants[i];
            let norm = alpha * alpha + beta * beta;
            if norm > 9.0 {
                let tau = 3.0 / norm.sqrt();
                slopes[i] = tau * alpha * secants[i];
                slopes[i + 1] = tau * beta * secants[i];
            }
        }
        Ok(MonotoneCubic { x, y, slopes })
    }

    pub fn start(&self) -> f64 {
        self.x[0]
    }

    pub fn end(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = locate(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.slopes[i] + h01 * self.y[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spline_reproduces_knots_exactly() {
        let x: Vec<f64> = (0..12).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::natural(x.clone(), y.clone()).unwrap();
        for (t, v) in x.iter().zip(&y) {
            assert_eq!(s.eval(*t), *v);
        }
    }

    #[test]
    fn spline_is_exact_on_lines() {
        let x = vec![0.0, 0.5, 1.7, 2.0, 3.1];
        let y: Vec<f64> = x.iter().map(|t| 2.0 * t - 1.0).collect();
        let s = CubicSpline::natural(x, y).unwrap();
        for t in [0.1, 0.9, 2.5, 3.0] {
            assert!((s.eval(t) - (2.0 * t - 1.0)).abs() < 1e-14);
            assert!((s.derivative(t) - 2.0).abs() < 1e-13);
            assert!(s.second_derivative(t).abs() < 1e-13);
        }
    }

    #[test]
    fn spline_converges_on_smooth_data() {
        let x: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01 * std::f64::consts::PI).collect();
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::natural(x, y).unwrap();
        for t in [0.4, 1.0, 2.2] {
            assert!((s.eval(t) - t.sin()).abs() < 1e-8);
            assert!((s.derivative(t) - t.cos()).abs() < 1e-5);
            assert!((s.second_derivative(t) + t.sin()).abs() < 1e-3);
        }
    }

    #[test]
    fn rejects_non_increasing_knots() {
        assert!(CubicSpline::natural(vec![0.0, 1.0, 1.0], vec![0.0; 3]).is_err());
        assert!(MonotoneCubic::new(vec![0.0, -1.0], vec![0.0; 2]).is_err());
    }

    proptest! {
        #[test]
        fn monotone_interpolant_preserves_order(
            steps in prop::collection::vec((0.01f64..1.0, 0.0f64..5.0), 2..30),
            probes in prop::collection::vec(0.0f64..1.0, 1..20),
        ) {
            let mut x = vec![0.0];
            let mut y = vec![0.0];
            for (dx, dy) in &steps {
                x.push(x.last().unwrap() + dx);
                y.push(y.last().unwrap() + dy);
            }
            let end = *x.last().unwrap();
            let interp = MonotoneCubic::new(x, y).unwrap();
            let mut ts: Vec<f64> = probes.iter().map(|p| p * end).collect();
            ts.sort_by(f64::total_cmp);
            for w in ts.windows(2) {
                prop_assert!(interp.eval(w[0]) <= interp.eval(w[1]) + 1e-12);
            }
        }
    }
}
