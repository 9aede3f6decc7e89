use std::path::Path;

use super::table::load_table;
use crate::numerics::CubicSpline;
use crate::{Error, Result};

/// Radial weight `f` of the measure `e^{-f} dv_g`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    Zero,
    /// `f = δ r`.
    Linear {
        delta: f64,
    },
    /// `f = δ sin r`.
    BoundedSine {
        delta: f64,
    },
    /// `f = c ln(1 + r)`.
    LogGrowth {
        c: f64,
    },
    /// `f' = c (1 - e^{-r})`, `f(0) = 0`.
    SaturatingRamp {
        c: f64,
    },
    /// `f' = c (1 - r^{-α})`. Singular at the pole; intended for the
    /// `t ≥ 1` conditions of the divergence criterion.
    AlgebraicRamp {
        c: f64,
        alpha: f64,
    },
    Tabulated(CubicSpline),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    kind: WeightKind,
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::param(format!("{name} must be finite, got {v}")))
    }
}

impl WeightFunction {
    pub fn zero() -> Self {
        WeightFunction { kind: WeightKind::Zero }
    }

    pub fn linear(delta: f64) -> Result<Self> {
        Ok(WeightFunction {
            kind: WeightKind::Linear {
                delta: finite("delta", delta)?,
            },
        })
    }

    pub fn bounded_sine(delta: f64) -> Result<Self> {
        Ok(WeightFunction {
            kind: WeightKind::BoundedSine {
                delta: finite("delta", delta)?,
            },
        })
    }

    pub fn log_growth(c: f64) -> Result<Self> {
        Ok(WeightFunction {
            kind: WeightKind::LogGrowth { c: finite("c", c)? },
        })
    }

    pub fn saturating_ramp(c: f64) -> Result<Self> {
        Ok(WeightFunction {
            kind: WeightKind::SaturatingRamp { c: finite("c", c)? },
        })
    }

    pub fn algebraic_ramp(c: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param(format!("alpha must be positive, got {alpha}")));
        }
        Ok(WeightFunction {
            kind: WeightKind::AlgebraicRamp {
                c: finite("c", c)?,
                alpha,
            },
        })
    }

    pub fn tabulated(r: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if r.first() != Some(&0.0) {
            return Err(Error::param("tabulated weight must start at r = 0"));
        }
        Ok(WeightFunction {
            kind: WeightKind::Tabulated(CubicSpline::natural(r, f)?),
        })
    }

    pub fn from_table_file(path: &Path) -> Result<Self> {
        let (r, f) = load_table(path)?;
        Self::tabulated(r, f)
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, WeightKind::Zero)
    }

    pub fn name(&self) -> String {
        match &self.kind {
            WeightKind::Zero => "zero".into(),
            WeightKind::Linear { delta } => format!("linear(delta={delta})"),
            WeightKind::BoundedSine { delta } => format!("bounded-sine(delta={delta})"),
            WeightKind::LogGrowth { c } => format!("log-growth(c={c})"),
            WeightKind::SaturatingRamp { c } => format!("saturating-ramp(c={c})"),
            WeightKind::AlgebraicRamp { c, alpha } => {
                format!("algebraic-ramp(c={c},alpha={alpha})")
            }
            WeightKind::Tabulated(_) => "tabulated".into(),
        }
    }

    /// Whether `f` extends smoothly to the pole.
    pub fn regular_at_pole(&self) -> bool {
        !matches!(self.kind, WeightKind::AlgebraicRamp { .. })
    }

    pub fn r_max(&self) -> f64 {
        match &self.kind {
            WeightKind::Tabulated(s) => s.end(),
            _ => f64::INFINITY,
        }
    }

    pub fn f(&self, r: f64) -> f64 {
        match &self.kind {
            WeightKind::Zero => 0.0,
            WeightKind::Linear { delta } => delta * r,
            WeightKind::BoundedSine { delta } => delta * r.sin(),
            WeightKind::LogGrowth { c } => c * r.ln_1p(),
            WeightKind::SaturatingRamp { c } => c * (r + (-r).exp_m1()),
            WeightKind::AlgebraicRamp { c, alpha } => {
                if *alpha == 1.0 {
                    c * (r - r.ln())
                } else {
                    c * (r + r.powf(1.0 - alpha) / (alpha - 1.0))
                }
            }
            WeightKind::Tabulated(s) => s.eval(r),
        }
    }

    /// `f'(r)`, the radial derivative `∂_r f = <∇f, γ'>`.
    pub fn f_prime(&self, r: f64) -> f64 {
        match &self.kind {
            WeightKind::Zero => 0.0,
            WeightKind::Linear { delta } => *delta,
            WeightKind::BoundedSine { delta } => delta * r.cos(),
            WeightKind::LogGrowth { c } => c / (1.0 + r),
            WeightKind::SaturatingRamp { c } => -c * (-r).exp_m1(),
            WeightKind::AlgebraicRamp { c, alpha } => c * (1.0 - r.powf(-alpha)),
            WeightKind::Tabulated(s) => s.derivative(r),
        }
    }

    /// `f''(r) = Hess f(γ', γ')` along the radial geodesic.
    pub fn f_second(&self, r: f64) -> f64 {
        match &self.kind {
            WeightKind::Zero | WeightKind::Linear { .. } => 0.0,
            WeightKind::BoundedSine { delta } => -delta * r.sin(),
            WeightKind::LogGrowth { c } => -c / ((1.0 + r) * (1.0 + r)),
            WeightKind::SaturatingRamp { c } => c * (-r).exp(),
            WeightKind::AlgebraicRamp { c, alpha } => c * alpha * r.powf(-alpha - 1.0),
            WeightKind::Tabulated(s) => s.second_derivative(r),
        }
    }
}
