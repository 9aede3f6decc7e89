//! Constant-curvature model spaces `M^n_H`.
//!
//! `sn_H` solves `sn'' + H sn = 0` with `sn(0) = 0`, `sn'(0) = 1`, and the mean
//! curvature of a geodesic sphere of radius `t` in `M^n_H` is
//! `m_H(t) = (n - 1) sn_H'(t) / sn_H(t)`.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Below this value of `|H| t²` the flat branch is used.
const FLAT_THRESHOLD: f64 = 1e-12;

/// Hypothesis windows on `t` for positive model curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    /// `t ≤ π / (4√H)`, where `(sn_H²)'` and `(sn_H²)''` are both non-negative.
    Thm21,
    /// `t ≤ π / (2√H)`.
    Thm22,
    /// First zero of `sn_H`, `π / √H`.
    Conjugate,
}

/// Upper end of the window for curvature `h`; `+∞` when `h ≤ 0`.
pub fn valid_range(h: f64, window: Window) -> f64 {
    if h <= 0.0 {
        return f64::INFINITY;
    }
    let root = h.sqrt();
    match window {
        Window::Thm21 => PI / (4.0 * root),
        Window::Thm22 => PI / (2.0 * root),
        Window::Conjugate => PI / root,
    }
}

fn is_flat(h: f64, t: f64) -> bool {
    h == 0.0 || h.abs() * t * t < FLAT_THRESHOLD
}

/// `sn_H(t)`.
pub fn sn(h: f64, t: f64) -> f64 {
    if is_flat(h, t) {
        t
    } else if h > 0.0 {
        let k = h.sqrt();
        (k * t).sin() / k
    } else {
        let k = (-h).sqrt();
        (k * t).sinh() / k
    }
}

/// `sn_H'(t)`.
pub fn sn_prime(h: f64, t: f64) -> f64 {
    if is_flat(h, t) {
        1.0
    } else if h > 0.0 {
        (h.sqrt() * t).cos()
    } else {
        ((-h).sqrt() * t).cosh()
    }
}

/// Dimension and curvature of a model space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpaceParams {
    n: usize,
    h: f64,
}

impl ModelSpaceParams {
    pub fn new(n: usize, h: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("dimension must be at least 2, got {n}")));
        }
        if !h.is_finite() {
            return Err(Error::param(format!("curvature must be finite, got {h}")));
        }
        Ok(ModelSpaceParams { n, h })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn curvature(&self) -> f64 {
        self.h
    }

    pub fn sn(&self, t: f64) -> f64 {
        sn(self.h, t)
    }

    pub fn sn_prime(&self, t: f64) -> f64 {
        sn_prime(self.h, t)
    }

    /// `m_H(t)`, defined for `0 < t < π/√H` (any `t > 0` when `H ≤ 0`).
    pub fn mean_curvature(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain("m_H", t, "requires t > 0"));
        }
        let first_zero = valid_range(self.h, Window::Conjugate);
        if t >= first_zero {
            return Err(Error::domain(
                "m_H",
                t,
                format!("beyond the first zero of sn_H at {first_zero}"),
            ));
        }
        let nm1 = (self.n - 1) as f64;
        if is_flat(self.h, t) {
            return Ok(nm1 / t);
        }
        Ok(nm1 * self.sn_prime(t) / self.sn(t))
    }
}

/// The scaled bound `m_H(t) (1 + 4δ(t+1)/(n-1))`, i.e. the mean curvature of the
/// model space of "dimension" `n + 4δ(t+1)`. The non-integer dimension never
/// appears explicitly.
pub fn m_h_effective(n: usize, delta: f64, h: f64, t: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::param(format!("delta must be non-negative, got {delta}")));
    }
    let base = ModelSpaceParams::new(n, h)?.mean_curvature(t)?;
    if delta == 0.0 {
        return Ok(base);
    }
    Ok(base * (1.0 + 4.0 * delta * (t + 1.0) / (n - 1) as f64))
}
