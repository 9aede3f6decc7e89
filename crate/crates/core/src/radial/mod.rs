//! Rotationally symmetric smooth metric measure spaces
//! `([0, r_max) × S^{n-1}, dr² + φ(r)² g_{S^{n-1}}, e^{-f} dv)` with radial `f`.
//!
//! Along a radial unit-speed geodesic `γ(r)` the warped-product identities give
//!
//! ```text
//! Ric(γ', γ')      = -(n-1) φ''/φ
//! m(r)             =  (n-1) φ'/φ        (mean curvature of the geodesic sphere)
//! m_f              =  m - f'
//! Ric_f            =  Ric + f''
//! Ric_f^k          =  Ric_f - (f')²/k
//! ```
//!
//! Rotational symmetry makes the Riccati inequality `m' ≤ -m²/(n-1) - Ric` an
//! equality, which the tests use as the master self-check. The compactness
//! hypotheses are only examined along radial geodesics from the pole, which is
//! exact for these spaces.

mod growth;
mod profile;
pub mod table;
mod weight;

pub use growth::{GrowthFunction, GrowthKind};
pub use profile::{ProfileKind, WarpProfile};
pub use weight::{WeightFunction, WeightKind};

use crate::{Error, Result};

/// Smallest radius at which curvature quantities are evaluated. Below it the
/// pole asymptotics `m ~ (n-1)/r` should be used directly.
pub const R_MIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialManifold {
    n: usize,
    profile: WarpProfile,
    weight: WeightFunction,
    known_compact: Option<bool>,
}

impl RadialManifold {
    pub fn new(n: usize, profile: WarpProfile, weight: WeightFunction) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("dimension must be at least 2, got {n}")));
        }
        Ok(RadialManifold {
            n,
            profile,
            weight,
            known_compact: None,
        })
    }

    /// Round sphere of curvature 1 (`φ = sin r`), compact.
    pub fn sphere(n: usize) -> Result<Self> {
        Self::space_form(n, 1.0)
    }

    /// Flat space (`φ = r`), non-compact.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::space_form(n, 0.0)
    }

    /// Hyperbolic space of curvature -1 (`φ = sinh r`), non-compact.
    pub fn hyperbolic(n: usize) -> Result<Self> {
        Self::space_form(n, -1.0)
    }

    /// Simply connected space form; compact exactly when `H > 0`.
    pub fn space_form(n: usize, curvature: f64) -> Result<Self> {
        Ok(
            Self::new(n, WarpProfile::space_form(curvature)?, WeightFunction::zero())?
                .with_known_compact(Some(curvature > 0.0)),
        )
    }

    /// `φ = sin r (1 + β sin² r)`: closes up smoothly at `r = π`, compact.
    pub fn perturbed_sine(n: usize, beta: f64) -> Result<Self> {
        Ok(Self::new(n, WarpProfile::perturbed_sine(beta)?, WeightFunction::zero())?.with_known_compact(Some(true)))
    }

    /// `φ = r (1 + β r² e^{-r})`: asymptotically flat, non-compact.
    pub fn perturbed_linear(n: usize, beta: f64) -> Result<Self> {
        Ok(Self::new(n, WarpProfile::perturbed_linear(beta)?, WeightFunction::zero())?.with_known_compact(Some(false)))
    }

    pub fn with_weight(mut self, weight: WeightFunction) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_known_compact(mut self, known_compact: Option<bool>) -> Self {
        self.known_compact = known_compact;
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> &WarpProfile {
        &self.profile
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn known_compact(&self) -> Option<bool> {
        self.known_compact
    }

    pub fn name(&self) -> String {
        format!("{}+{}", self.profile.name(), self.weight.name())
    }

    /// Common end of the profile and weight ranges.
    pub fn r_max(&self) -> f64 {
        self.profile.r_max().min(self.weight.r_max())
    }

    /// End of the range on which geodesic spheres are non-degenerate: the
    /// first zero of `φ`, capped by the weight's range.
    pub fn r_dom(&self) -> f64 {
        self.profile.first_zero().min(self.weight.r_max())
    }

    fn check(&self, quantity: &'static str, r: f64, end: f64) -> Result<()> {
        if !(r >= R_MIN) {
            return Err(Error::domain(
                quantity,
                r,
                format!("radius below the pole cutoff {R_MIN}"),
            ));
        }
        if !(r < end) {
            return Err(Error::domain(quantity, r, format!("outside [{R_MIN}, {end})")));
        }
        Ok(())
    }

    /// `Ric(γ', γ') = -(n-1) φ''/φ` along the radial geodesic.
    pub fn ricci_radial(&self, r: f64) -> Result<f64> {
        self.check("Ric", r, self.r_max())?;
        Ok(-((self.n - 1) as f64) * self.profile.phi_second(r) / self.profile.phi(r))
    }

    /// Mean curvature `(n-1) φ'/φ` of the geodesic sphere of radius `r`.
    pub fn mean_curvature(&self, r: f64) -> Result<f64> {
        self.check("m", r, self.r_dom())?;
        Ok((self.n - 1) as f64 * self.profile.phi_prime(r) / self.profile.phi(r))
    }

    /// f-mean curvature `m - ∂_r f`.
    pub fn f_mean_curvature(&self, r: f64) -> Result<f64> {
        Ok(self.mean_curvature(r)? - self.weight.f_prime(r))
    }

    /// Bakry-Emery Ricci curvature `Ric + Hess f` in the radial direction.
    pub fn ric_f(&self, r: f64) -> Result<f64> {
        Ok(self.ricci_radial(r)? + self.weight.f_second(r))
    }

    /// `Ric_f^k = Ric + Hess f - df⊗df / k`; `k = +∞` gives [`Self::ric_f`].
    pub fn ric_f_k(&self, k: f64, r: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(Error::param(format!("k must be positive, got {k}")));
        }
        let fp = self.weight.f_prime(r);
        Ok(self.ric_f(r)? - fp * fp / k)
    }
}
