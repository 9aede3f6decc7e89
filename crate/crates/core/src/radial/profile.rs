use std::f64::consts::PI;
use std::path::Path;

use super::table::load_table;
use crate::model_space::{self, valid_range, Window};
use crate::numerics::CubicSpline;
use crate::{Error, Result};

/// Closed-form or tabulated warp function `φ` of `dr² + φ(r)² g_{S^{n-1}}`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// `φ = sn_H`, the constant-curvature space form.
    SpaceForm { curvature: f64 },
    /// `φ(r) = sin r (1 + β sin² r)` on `(0, π)`.
    PerturbedSine { beta: f64 },
    /// `φ(r) = r (1 + β r² e^{-r})`.
    PerturbedLinear { beta: f64 },
    /// Natural cubic spline through `(r, φ)` samples starting at the pole.
    Tabulated(CubicSpline),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarpProfile {
    kind: ProfileKind,
}

impl WarpProfile {
    pub fn space_form(curvature: f64) -> Result<Self> {
        if !curvature.is_finite() {
            return Err(Error::param("space-form curvature must be finite"));
        }
        Ok(WarpProfile {
            kind: ProfileKind::SpaceForm { curvature },
        })
    }

    pub fn perturbed_sine(beta: f64) -> Result<Self> {
        if !(beta > -0.2 && beta < 0.2) {
            return Err(Error::param(format!(
                "perturbed-sine beta must lie in (-0.2, 0.2), got {beta}"
            )));
        }
        Ok(WarpProfile {
            kind: ProfileKind::PerturbedSine { beta },
        })
    }

    /// `beta` must keep `1 + β r² e^{-r}` positive; `r² e^{-r}` peaks at `4e^{-2}`.
    pub fn perturbed_linear(beta: f64) -> Result<Self> {
        let floor = -(2.0f64).exp() / 4.0;
        if !(beta.is_finite() && beta > floor) {
            return Err(Error::param(format!(
                "perturbed-linear beta must exceed {floor:.4}, got {beta}"
            )));
        }
        Ok(WarpProfile {
            kind: ProfileKind::PerturbedLinear { beta },
        })
    }

    /// Tabulated profile. The first sample must be the pole `(0, 0)` and the
    /// interior samples positive until the profile closes up (a non-positive
    /// sample marks the end of the usable range).
    pub fn tabulated(r: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if r.first() != Some(&0.0) || phi.first() != Some(&0.0) {
            return Err(Error::param("tabulated profile must start at the pole (0, 0)"));
        }
        if phi.get(1).is_none_or(|&v| v <= 0.0) {
            return Err(Error::param("tabulated profile must be positive after the pole"));
        }
        Ok(WarpProfile {
            kind: ProfileKind::Tabulated(CubicSpline::natural(r, phi)?),
        })
    }

    pub fn from_table_file(path: &Path) -> Result<Self> {
        let (r, phi) = load_table(path)?;
        Self::tabulated(r, phi)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.kind, ProfileKind::Tabulated(_))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            ProfileKind::SpaceForm { curvature } if *curvature == 0.0 => "euclidean".into(),
            ProfileKind::SpaceForm { curvature } if *curvature == 1.0 => "sphere".into(),
            ProfileKind::SpaceForm { curvature } if *curvature == -1.0 => "hyperbolic".into(),
            ProfileKind::SpaceForm { curvature } => format!("space-form(H={curvature})"),
            ProfileKind::PerturbedSine { beta } => format!("perturbed-sine(beta={beta})"),
            ProfileKind::PerturbedLinear { beta } => format!("perturbed-linear(beta={beta})"),
            ProfileKind::Tabulated(_) => "tabulated".into(),
        }
    }

    /// End of the radial coordinate range.
    pub fn r_max(&self) -> f64 {
        match &self.kind {
            ProfileKind::SpaceForm { curvature } => valid_range(*curvature, Window::Conjugate),
            ProfileKind::PerturbedSine { .. } => PI,
            ProfileKind::PerturbedLinear { .. } => f64::INFINITY,
            ProfileKind::Tabulated(s) => s.end(),
        }
    }

    /// First zero of `φ` after the pole (or the end of the range).
    pub fn first_zero(&self) -> f64 {
        match &self.kind {
            ProfileKind::Tabulated(s) => s
                .knots()
                .iter()
                .zip(s.values())
                .skip(1)
                .find(|(_, &v)| v <= 0.0)
                .map_or(s.end(), |(&r, _)| r),
            _ => self.r_max(),
        }
    }

    pub fn phi(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::SpaceForm { curvature } => model_space::sn(*curvature, r),
            ProfileKind::PerturbedSine { beta } => {
                let s = r.sin();
                s * (1.0 + beta * s * s)
            }
            ProfileKind::PerturbedLinear { beta } => r * (1.0 + beta * r * r * (-r).exp()),
            ProfileKind::Tabulated(s) => s.eval(r),
        }
    }

    pub fn phi_prime(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::SpaceForm { curvature } => model_space::sn_prime(*curvature, r),
            ProfileKind::PerturbedSine { beta } => {
                let s = r.sin();
                r.cos() * (1.0 + 3.0 * beta * s * s)
            }
            ProfileKind::PerturbedLinear { beta } => 1.0 + beta * (-r).exp() * (3.0 * r * r - r * r * r),
            ProfileKind::Tabulated(s) => s.derivative(r),
        }
    }

    pub fn phi_second(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::SpaceForm { curvature } => -curvature * model_space::sn(*curvature, r),
            ProfileKind::PerturbedSine { beta } => {
                let (s, c) = r.sin_cos();
                s * (6.0 * beta * c * c - 1.0 - 3.0 * beta * s * s)
            }
            ProfileKind::PerturbedLinear { beta } => beta * (-r).exp() * (6.0 * r - 6.0 * r * r + r * r * r),
            ProfileKind::Tabulated(s) => s.second_derivative(r),
        }
    }

    /// `max(|φ(r)|, |φ'(r) - 1|)` at `r = 1e-8`; smoothness at the pole needs
    /// this to be small.
    pub fn pole_defect(&self) -> f64 {
        let r = 1e-8;
        self.phi(r).abs().max((self.phi_prime(r) - 1.0).abs())
    }
}
