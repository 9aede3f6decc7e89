use std::path::Path;

use super::table::load_table;
use crate::numerics::CubicSpline;
use crate::{Error, Result};

/// Positive function `h` on `[0, ∞)` appearing on the right of the criteria
/// `Ric ≥ C · h(r)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthKind {
    Constant {
        c: f64,
    },
    /// `h(r) = (r0 + r)^{-b}`.
    PowerLaw {
        b: f64,
        r0: f64,
    },
    /// Spline through samples on `[0, r_last]`, continued by
    /// `h(r_last) (r_last / r)^p` beyond the last knot (`p = tail_power`).
    Tabulated {
        spline: CubicSpline,
        tail_power: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFunction {
    kind: GrowthKind,
}

impl GrowthFunction {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::param(format!("constant growth must be positive, got {c}")));
        }
        Ok(GrowthFunction {
            kind: GrowthKind::Constant { c },
        })
    }

    pub fn power_law(b: f64, r0: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::param(format!("power-law exponent must be finite, got {b}")));
        }
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::param(format!("r0 must be positive, got {r0}")));
        }
        Ok(GrowthFunction {
            kind: GrowthKind::PowerLaw { b, r0 },
        })
    }

    /// Samples must start at `r = 0` and be positive; the spline is also
    /// checked for positivity between knots.
    pub fn tabulated(r: Vec<f64>, h: Vec<f64>, tail_power: f64) -> Result<Self> {
        if r.first() != Some(&0.0) {
            return Err(Error::param("tabulated growth function must start at r = 0"));
        }
        if h.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::param("tabulated growth function must be positive"));
        }
        if !(tail_power >= 0.0 && tail_power.is_finite()) {
            return Err(Error::param(format!(
                "tail power must be non-negative, got {tail_power}"
            )));
        }
        let spline = CubicSpline::natural(r, h)?;
        let knots = spline.knots();
        for w in knots.windows(2) {
            for j in 1..10 {
                let t = w[0] + (w[1] - w[0]) * j as f64 / 10.0;
                if spline.eval(t) <= 0.0 {
                    return Err(Error::param(format!(
                        "interpolated growth function is not positive near r = {t}"
                    )));
                }
            }
        }
        Ok(GrowthFunction {
            kind: GrowthKind::Tabulated { spline, tail_power },
        })
    }

    pub fn from_table_file(path: &Path, tail_power: f64) -> Result<Self> {
        let (r, h) = load_table(path)?;
        Self::tabulated(r, h, tail_power)
    }

    pub fn kind(&self) -> &GrowthKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            GrowthKind::Constant { c } => format!("constant(c={c})"),
            GrowthKind::PowerLaw { b, r0 } => format!("power-law(b={b},r0={r0})"),
            GrowthKind::Tabulated { tail_power, .. } => format!("tabulated(tail={tail_power})"),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.kind {
            GrowthKind::Constant { c } => *c,
            GrowthKind::PowerLaw { b, r0 } => (r0 + r).powf(-b),
            GrowthKind::Tabulated { spline, tail_power } => {
                let last = spline.end();
                if r <= last {
                    spline.eval(r)
                } else {
                    spline.eval(last) * (last / r).powf(*tail_power)
                }
            }
        }
    }

    /// Closed form of `∫_eps^∞ h`, when one exists. `Some(+∞)` for divergent
    /// tails; `None` when quadrature is required.
    pub fn analytic_tail(&self, eps: f64) -> Option<f64> {
        match &self.kind {
            GrowthKind::Constant { .. } => Some(f64::INFINITY),
            GrowthKind::PowerLaw { b, r0 } => Some(if *b > 1.0 {
                (r0 + eps).powf(1.0 - b) / (b - 1.0)
            } else {
                f64::INFINITY
            }),
            GrowthKind::Tabulated { spline, tail_power } => {
                let last = spline.end();
                if *tail_power <= 1.0 {
                    Some(f64::INFINITY)
                } else if eps >= last {
                    Some(spline.eval(last) * last.powf(*tail_power) * eps.powf(1.0 - tail_power) / (tail_power - 1.0))
                } else {
                    None
                }
            }
        }
    }

    /// For tabulated functions: knots and the analytic part of the tail beyond
    /// the last knot. Used by quadrature to integrate knot interval by knot
    /// interval.
    pub(crate) fn tabulated_parts(&self) -> Option<(&CubicSpline, f64)> {
        match &self.kind {
            GrowthKind::Tabulated { spline, tail_power } if *tail_power > 1.0 => {
                let last = spline.end();
                Some((spline, spline.eval(last) * last / (tail_power - 1.0)))
            }
            _ => None,
        }
    }
}
