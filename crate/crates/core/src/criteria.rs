//! Explicit compactness constants and their evaluation against a manifold.
//!
//! Each constant multiplies a positive growth function `h`; a manifold whose
//! (weighted) radial Ricci curvature dominates `C · h(r)` for all `r` is
//! compact. When `∫_ε^∞ h` diverges, any positive `ε1` works, and the
//! corresponding constants collapse to `ε1`.

use std::fmt;
use std::str::FromStr;

use crate::comparison::TOLERANCE;
use crate::numerics::{golden_section_min, integrate, Quadrature};
use crate::radial::{GrowthFunction, RadialManifold, R_MIN};
use crate::riccati::{integrate_jacobi, DEFAULT_STEP};
use crate::{Error, Result};

/// Grid size used by [`evaluate_criterion`].
pub const CRITERION_GRID_POINTS: usize = 2000;

const MIN_GRID_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    Wan,
    Qiu,
    Cgt,
}

impl Variant {
    pub const ALL: [Variant; 9] = [
        Variant::C1,
        Variant::C2,
        Variant::C3,
        Variant::C4,
        Variant::C5,
        Variant::C6,
        Variant::Wan,
        Variant::Qiu,
        Variant::Cgt,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::C1 => "C1",
            Variant::C2 => "C2",
            Variant::C3 => "C3",
            Variant::C4 => "C4",
            Variant::C5 => "C5",
            Variant::C6 => "C6",
            Variant::Wan => "Wan",
            Variant::Qiu => "Qiu",
            Variant::Cgt => "CGT",
        }
    }

    /// Variants whose growth function is the power law `(r0 + r)^{-b}`.
    pub fn uses_power_law(&self) -> bool {
        matches!(self, Variant::C2 | Variant::C4 | Variant::C6 | Variant::Wan)
    }

    /// Variants that can be checked pointwise by [`evaluate_criterion`].
    pub fn is_evaluable(&self) -> bool {
        matches!(
            self,
            Variant::C1 | Variant::C2 | Variant::C3 | Variant::C4 | Variant::C5 | Variant::C6
        )
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .iter()
            .copied()
            .find(|v| v.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::param(format!("unknown variant '{s}'")))
    }
}

/// Which printed form of the `C3` constant to use. The proof's chain of
/// estimates produces `2a`; the displayed statement has `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum C3Convention {
    Statement,
    #[default]
    Proof,
}

impl C3Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            C3Convention::Statement => "statement",
            C3Convention::Proof => "proof",
        }
    }
}

impl FromStr for C3Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "statement" => Ok(C3Convention::Statement),
            "proof" => Ok(C3Convention::Proof),
            other => Err(Error::param(format!(
                "unknown C3 convention '{other}' (expected statement or proof)"
            ))),
        }
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::param(msg()))
    }
}

fn check_free_constants(eps: f64, eps1: f64) -> Result<()> {
    require(eps > 0.0 && eps.is_finite(), || {
        format!("eps must be positive, got {eps}")
    })?;
    require(eps1 >= 0.0 && eps1.is_finite(), || {
        format!("eps1 must be non-negative, got {eps1}")
    })
}

fn check_dim(n: usize) -> Result<()> {
    require(n >= 2, || format!("dimension must be at least 2, got {n}"))
}

/// `∫_ε^∞ h(s) ds`, `+∞` when the tail diverges.
pub fn tail_integral(h: &GrowthFunction, eps: f64) -> Result<f64> {
    require(eps > 0.0 && eps.is_finite(), || {
        format!("eps must be positive, got {eps}")
    })?;
    if let Some(v) = h.analytic_tail(eps) {
        return Ok(v);
    }
    let (spline, beyond_last) = h
        .tabulated_parts()
        .expect("only tabulated growth functions lack a closed-form tail");
    let opts = Quadrature::default();
    let mut total = beyond_last;
    for w in spline.knots().windows(2) {
        if w[1] <= eps {
            continue;
        }
        let lo = w[0].max(eps);
        total += integrate(|s| spline.eval(s), lo, w[1], opts)?;
    }
    Ok(total)
}

/// `(factor) / ∫_ε^∞ h + ε1`, or `ε1` alone for a divergent tail.
fn over_tail(factor: f64, tail: f64, eps1: f64) -> f64 {
    if tail.is_infinite() {
        eps1
    } else {
        factor / tail + eps1
    }
}

fn c1_prefactor(n: usize, delta: f64, eps: f64) -> f64 {
    4.0 * delta + (n as f64 + 4.0 * delta * (eps + 1.0) - 1.0) / eps
}

pub fn const_c1(h: &GrowthFunction, n: usize, delta: f64, eps: f64, eps1: f64) -> Result<f64> {
    check_dim(n)?;
    check_free_constants(eps, eps1)?;
    require(delta >= 0.0 && delta.is_finite(), || {
        format!("delta must be non-negative, got {delta}")
    })?;
    Ok(over_tail(c1_prefactor(n, delta, eps), tail_integral(h, eps)?, eps1))
}

pub fn const_c2(n: usize, b: f64, r0: f64, delta: f64, eps: f64, eps1: f64) -> Result<f64> {
    check_dim(n)?;
    check_free_constants(eps, eps1)?;
    require(delta >= 0.0 && delta.is_finite(), || {
        format!("delta must be non-negative, got {delta}")
    })?;
    require(r0 > 0.0 && r0.is_finite(), || format!("r0 must be positive, got {r0}"))?;
    if b <= 1.0 {
        return Ok(eps1);
    }
    Ok(c1_prefactor(n, delta, eps) * (b - 1.0) * (r0 + eps).powf(b - 1.0) + eps1)
}

pub fn const_c3(h: &GrowthFunction, n: usize, a: f64, eps: f64, eps1: f64, convention: C3Convention) -> Result<f64> {
    check_dim(n)?;
    check_free_constants(eps, eps1)?;
    require(a >= 0.0 && a.is_finite(), || format!("a must be non-negative, got {a}"))?;
    let a_term = match convention {
        C3Convention::Statement => a,
        C3Convention::Proof => 2.0 * a,
    };
    let factor = a_term + (n - 1) as f64 / eps;
    Ok(over_tail(factor, tail_integral(h, eps)?, eps1))
}

/// For `b > 2` the closed form at `ε = r0/(b-2)` is returned and `eps` is
/// ignored. The `b > 1` branches carry no `ε1`.
pub fn const_c4(n: usize, b: f64, r0: f64, a: f64, eps: f64, eps1: f64) -> Result<f64> {
    check_dim(n)?;
    check_free_constants(eps, eps1)?;
    require(a >= 0.0 && a.is_finite(), || format!("a must be non-negative, got {a}"))?;
    require(r0 > 0.0 && r0.is_finite(), || format!("r0 must be positive, got {r0}"))?;
    let nm1 = (n - 1) as f64;
    Ok(if b > 2.0 {
        (2.0 * a * r0 + nm1 * (b - 2.0)) * r0.powf(b - 2.0) * (b - 1.0).powf(b) / (b - 2.0).powf(b - 1.0)
    } else if b > 1.0 {
        (2.0 * a + nm1 / eps) * (b - 1.0) * (r0 + eps).powf(b - 1.0)
    } else {
        eps1
    })
}

pub fn const_c5(h: &GrowthFunction, n: usize, k: f64, eps: f64, eps1: f64) -> Result<f64> {
    check_dim(n)?;
    check_free_constants(eps, eps1)?;
    require(k >= 0.0 && k.is_finite(), || format!("k must be non-negative, got {k}"))?;
    let factor = (n as f64 + k - 1.0) / eps;
    Ok(over_tail(factor, tail_integral(h, eps)?, eps1))
}

/// Same branch structure as [`const_c4`].
pub fn const_c6(n: usize, k: f64, b: f64, r0: f64, eps: f64, eps1: f64) -> Result<f64> {
    check_dim(n)?;
    check_free_constants(eps, eps1)?;
    require(k >= 0.0 && k.is_finite(), || format!("k must be non-negative, got {k}"))?;
    require(r0 > 0.0 && r0.is_finite(), || format!("r0 must be positive, got {r0}"))?;
    let nk = n as f64 + k - 1.0;
    Ok(if b > 2.0 {
        nk * (b - 1.0).powf(b) / (b - 2.0).powf(b - 2.0) * r0.powf(b - 2.0)
    } else if b > 1.0 {
        nk / eps * (b - 1.0) * (r0 + eps).powf(b - 1.0)
    } else {
        eps1
    })
}

/// Unweighted power-law constant; defined for `b ≥ 2` only.
pub fn wan_constant(n: usize, b: f64, r0: f64, eps: f64) -> Result<f64> {
    check_dim(n)?;
    require(r0 > 0.0 && r0.is_finite(), || format!("r0 must be positive, got {r0}"))?;
    let nm1 = (n - 1) as f64;
    if b > 2.0 {
        Ok(nm1 * (b - 1.0).powf(b) / (b - 2.0).powf(b - 2.0) * r0.powf(b - 2.0))
    } else if b == 2.0 {
        require(eps > 0.0 && eps.is_finite(), || {
            format!("eps must be positive, got {eps}")
        })?;
        Ok(nm1 * (1.0 + r0 / eps))
    } else {
        Err(Error::param(format!("the power-law constant needs b >= 2, got {b}")))
    }
}

/// Bound on the Bakry-Émery tensor with a vector field whose radial
/// component is at most `δ1`.
pub fn qiu_delta2(h: &GrowthFunction, n: usize, delta1: f64, eps: f64, eps1: f64) -> Result<f64> {
    check_dim(n)?;
    check_free_constants(eps, eps1)?;
    require(delta1 >= 0.0 && delta1.is_finite(), || {
        format!("delta1 must be non-negative, got {delta1}")
    })?;
    let factor = (n - 1) as f64 / eps + 2.0 * delta1;
    Ok(over_tail(factor, tail_integral(h, eps)?, eps1))
}

/// Diameter bound `r0 e^{π/ν}`.
pub fn cgt_diameter(r0: f64, nu: f64) -> Result<f64> {
    require(r0 > 0.0 && r0.is_finite(), || format!("r0 must be positive, got {r0}"))?;
    require(nu > 0.0, || format!("nu must be positive, got {nu}"))?;
    Ok(r0 * (std::f64::consts::PI / nu).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptimizedVariant {
    C4,
    C6,
}

/// Minimises the `ε`-dependent power-law bound
///
/// ```text
/// C4(ε) = (2a + (n-1)/ε) (b-1) (r0+ε)^{b-1}
/// C6(ε) = ((n+k-1)/ε)   (b-1) (r0+ε)^{b-1}
/// ```
///
/// over `ε ∈ (1e-6, 1e3 r0)` by golden-section search on `ln ε`. Returns the
/// minimiser and the minimum. `a` is ignored for `C6` and `k` for `C4`.
pub fn epsilon_optimize(variant: OptimizedVariant, n: usize, k: f64, b: f64, r0: f64, a: f64) -> Result<(f64, f64)> {
    check_dim(n)?;
    require(b > 2.0 && b.is_finite(), || {
        format!("epsilon optimisation needs b > 2, got {b}")
    })?;
    require(r0 > 0.0 && r0.is_finite(), || format!("r0 must be positive, got {r0}"))?;
    let lead = match variant {
        OptimizedVariant::C4 => {
            require(a >= 0.0 && a.is_finite(), || format!("a must be non-negative, got {a}"))?;
            2.0 * a
        }
        OptimizedVariant::C6 => {
            require(k >= 0.0 && k.is_finite(), || format!("k must be non-negative, got {k}"))?;
            0.0
        }
    };
    let numerator = match variant {
        OptimizedVariant::C4 => (n - 1) as f64,
        OptimizedVariant::C6 => n as f64 + k - 1.0,
    };
    let bound = |eps: f64| (lead + numerator / eps) * (b - 1.0) * (r0 + eps).powf(b - 1.0);
    let best = golden_section_min(|x| bound(x.exp()), 1e-6f64.ln(), (1e3 * r0).ln(), 1e-12, 500);
    let eps = best.x.exp();
    Ok((eps, bound(eps)))
}

/// Parameters of a compactness criterion. Only the fields used by
/// `variant` are read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionParams {
    pub variant: Variant,
    pub n: usize,
    pub delta: f64,
    pub a: f64,
    pub k: f64,
    pub b: f64,
    pub r0: f64,
    pub nu: f64,
    pub delta1: f64,
    pub eps: f64,
    pub eps1: f64,
    pub c3_convention: C3Convention,
}

impl CriterionParams {
    pub fn new(variant: Variant, n: usize) -> Self {
        CriterionParams {
            variant,
            n,
            delta: 0.1,
            a: 0.0,
            k: 1.0,
            b: 3.0,
            r0: 1.0,
            nu: 1.0,
            delta1: 0.0,
            eps: 1.0,
            eps1: 0.01,
            c3_convention: C3Convention::Proof,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.n)?;
        require(self.eps > 0.0 && self.eps.is_finite(), || {
            format!("eps must be positive, got {}", self.eps)
        })?;
        require(self.eps1 > 0.0 && self.eps1.is_finite(), || {
            format!("eps1 must be positive, got {}", self.eps1)
        })?;
        if self.variant.uses_power_law() || self.variant == Variant::Cgt {
            require(self.r0 > 0.0 && self.r0.is_finite(), || {
                format!("r0 must be positive, got {}", self.r0)
            })?;
            require(self.b.is_finite(), || format!("b must be finite, got {}", self.b))?;
        }
        match self.variant {
            Variant::C1 | Variant::C2 => require(self.delta > 0.0 && self.delta.is_finite(), || {
                format!("delta must be positive, got {}", self.delta)
            }),
            Variant::C3 | Variant::C4 => require(self.a >= 0.0 && self.a.is_finite(), || {
                format!("a must be non-negative, got {}", self.a)
            }),
            Variant::C5 | Variant::C6 => require(self.k > 0.0 && self.k.is_finite(), || {
                format!("k must be positive, got {}", self.k)
            }),
            Variant::Wan => require(self.b >= 2.0, || format!("Wan's constant needs b >= 2, got {}", self.b)),
            Variant::Qiu => require(self.delta1 >= 0.0 && self.delta1.is_finite(), || {
                format!("delta1 must be non-negative, got {}", self.delta1)
            }),
            Variant::Cgt => require(self.nu > 0.0, || format!("nu must be positive, got {}", self.nu)),
        }
    }

    /// The growth function a power-law variant is stated for.
    pub fn power_law(&self) -> Result<GrowthFunction> {
        GrowthFunction::power_law(self.b, self.r0)
    }

    /// Value of the variant's constant. `h` is required by the variants
    /// stated for a general growth function and ignored by the others.
    pub fn constant(&self, h: Option<&GrowthFunction>) -> Result<f64> {
        self.validate()?;
        let need_h = || h.ok_or_else(|| Error::param(format!("{} needs a growth function", self.variant)));
        let p = self;
        match p.variant {
            Variant::C1 => const_c1(need_h()?, p.n, p.delta, p.eps, p.eps1),
            Variant::C2 => const_c2(p.n, p.b, p.r0, p.delta, p.eps, p.eps1),
            Variant::C3 => const_c3(need_h()?, p.n, p.a, p.eps, p.eps1, p.c3_convention),
            Variant::C4 => const_c4(p.n, p.b, p.r0, p.a, p.eps, p.eps1),
            Variant::C5 => const_c5(need_h()?, p.n, p.k, p.eps, p.eps1),
            Variant::C6 => const_c6(p.n, p.k, p.b, p.r0, p.eps, p.eps1),
            Variant::Wan => wan_constant(p.n, p.b, p.r0, p.eps),
            Variant::Qiu => qiu_delta2(need_h()?, p.n, p.delta1, p.eps, p.eps1),
            Variant::Cgt => cgt_diameter(p.r0, p.nu),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactnessVerdict {
    pub variant: Variant,
    pub constant_used: f64,
    /// Grid window `[R_MIN, end]` on which the criterion was checked.
    pub window: (f64, f64),
    /// Minimum over the grid of `tensor(r) - C h(r)`.
    pub min_margin: f64,
    /// First grid radius where the curvature inequality fails.
    pub first_violation: Option<f64>,
    /// Minimum of the weight hypothesis margin; `+∞` when the variant has none.
    pub weight_margin: f64,
    pub weight_hypothesis_met: bool,
    pub curvature_bound_met: bool,
    pub criterion_met: bool,
    pub predicted_compact: bool,
    /// The criterion was met on a manifold known to be non-compact.
    pub inconsistent: bool,
    /// Conjugate time of `u'' + (C h / n_eff) u = 0` on the tested window.
    pub cross_check: Option<f64>,
    pub notes: Vec<String>,
}

/// Checks `tensor(r) ≥ C h(r)` on a [`CRITERION_GRID_POINTS`]-point grid over
/// `[R_MIN, min(r_max_test, r_dom)]`. `tensor` is `Ric_f` for C1-C4 and
/// `Ric_f^k` for C5/C6. Power-law variants build `h` from `b`, `r0`, and
/// ignore the `h` argument.
pub fn evaluate_criterion(
    m: &RadialManifold,
    params: &CriterionParams,
    h: Option<&GrowthFunction>,
    r_max_test: f64,
) -> Result<CompactnessVerdict> {
    evaluate_criterion_on_grid(m, params, h, r_max_test, CRITERION_GRID_POINTS)
}

pub fn evaluate_criterion_on_grid(
    m: &RadialManifold,
    params: &CriterionParams,
    h: Option<&GrowthFunction>,
    r_max_test: f64,
    points: usize,
) -> Result<CompactnessVerdict> {
    params.validate()?;
    let variant = params.variant;
    require(variant.is_evaluable(), || {
        format!("{variant} is not a pointwise criterion on a weighted manifold")
    })?;
    require(points >= MIN_GRID_POINTS, || {
        format!("criterion grid needs at least {MIN_GRID_POINTS} points, got {points}")
    })?;
    require(params.n == m.dim(), || {
        format!(
            "parameter n = {} does not match manifold dimension {}",
            params.n,
            m.dim()
        )
    })?;
    require(r_max_test > R_MIN && r_max_test.is_finite(), || {
        format!("r_max_test must be finite and exceed {R_MIN}, got {r_max_test}")
    })?;

    let mut notes = Vec::new();
    let power_law;
    let h = if variant.uses_power_law() {
        power_law = params.power_law()?;
        &power_law
    } else {
        h.ok_or_else(|| Error::param(format!("{variant} needs a growth function")))?
    };
    let c = params.constant(Some(h))?;
    if !variant.uses_power_law() && tail_integral(h, params.eps)?.is_infinite() {
        notes.push("tail integral diverges; constant is eps1".to_string());
    }
    if variant == Variant::C3 && params.c3_convention == C3Convention::Statement {
        notes.push("C3 uses the printed statement form (a instead of 2a)".to_string());
    }
    if variant == Variant::C4 && params.a > 0.0 && params.b > 2.0 {
        let (eps_star, best) = epsilon_optimize(OptimizedVariant::C4, params.n, 0.0, params.b, params.r0, params.a)?;
        if best < c * (1.0 - 1e-9) {
            notes.push(format!("smaller C4 = {best:.6e} attained at eps = {eps_star:.6e}"));
        }
    }

    let r_dom = m.r_dom();
    let end = r_max_test.min(if r_dom.is_finite() { r_dom - R_MIN } else { r_dom });
    require(end > R_MIN, || format!("empty criterion window [{R_MIN}, {end}]"))?;
    notes.push(format!("criterion checked on [{R_MIN}, {end}] only"));

    let tensor = |r: f64| -> Result<f64> {
        match variant {
            Variant::C5 | Variant::C6 => m.ric_f_k(params.k, r),
            _ => m.ric_f(r),
        }
    };
    let weight = m.weight();
    let weight_hyp = |r: f64| -> f64 {
        match variant {
            Variant::C1 | Variant::C2 => params.delta * (r + 1.0) - weight.f(r).abs(),
            Variant::C3 | Variant::C4 => weight.f_prime(r) + params.a,
            _ => f64::INFINITY,
        }
    };

    let mut min_margin = f64::INFINITY;
    let mut weight_margin = f64::INFINITY;
    let mut first_violation = None;
    let mut first_weight_failure = None;
    for i in 0..points {
        let r = R_MIN + (end - R_MIN) * i as f64 / (points - 1) as f64;
        let margin = tensor(r)? - c * h.eval(r);
        if margin < 0.0 && first_violation.is_none() {
            first_violation = Some(r);
        }
        min_margin = min_margin.min(margin);
        let w = weight_hyp(r);
        if w < -TOLERANCE && first_weight_failure.is_none() {
            first_weight_failure = Some(r);
        }
        weight_margin = weight_margin.min(w);
    }
    if let Some(r) = first_weight_failure {
        notes.push(format!("weight hypothesis fails first at r = {r:.6e}"));
    }

    let weight_hypothesis_met = weight_margin >= -TOLERANCE;
    let curvature_bound_met = min_margin >= 0.0;
    let criterion_met = weight_hypothesis_met && curvature_bound_met;
    let inconsistent = criterion_met && m.known_compact() == Some(false);
    if inconsistent {
        notes.push("criterion met on a manifold known to be non-compact".to_string());
    }

    let n_eff = match variant {
        Variant::C5 | Variant::C6 => params.n as f64 + params.k - 1.0,
        _ => (params.n - 1) as f64,
    };
    let step = DEFAULT_STEP.min(end / 10.0);
    let cross_check = integrate_jacobi(|t| c * h.eval(t), n_eff, r_max_test, step)?.conjugate_time();

    Ok(CompactnessVerdict {
        variant,
        constant_used: c,
        window: (R_MIN, end),
        min_margin,
        first_violation,
        weight_margin,
        weight_hypothesis_met,
        curvature_bound_met,
        criterion_met,
        predicted_compact: criterion_met,
        inconsistent,
        cross_check,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::WeightFunction;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{E, PI};

    fn inv_square() -> GrowthFunction {
        GrowthFunction::power_law(2.0, 1.0).unwrap()
    }

    #[test]
    fn tail_integral_examples() {
        assert_relative_eq!(tail_integral(&inv_square(), 1.0).unwrap(), 0.5, max_relative = 1e-15);
        assert_eq!(
            tail_integral(&GrowthFunction::constant(3.0).unwrap(), 2.0).unwrap(),
            f64::INFINITY
        );
        let cubic = GrowthFunction::power_law(3.0, 1.0).unwrap();
        assert_relative_eq!(tail_integral(&cubic, 1.0).unwrap(), 0.125, max_relative = 1e-15);
        assert_eq!(
            tail_integral(&GrowthFunction::power_law(1.0, 1.0).unwrap(), 1.0).unwrap(),
            f64::INFINITY
        );
        assert!(tail_integral(&cubic, 0.0).is_err());
    }

    #[test]
    fn tabulated_tail_matches_closed_form() {
        // h = (1+s)^{-3} sampled densely; beyond the last knot it continues as
        // h(L)(L/s)^3, which differs from the true tail by a known amount.
        let last: f64 = 20.0;
        let r: Vec<f64> = (0..=4000).map(|i| last * i as f64 / 4000.0).collect();
        let hv: Vec<f64> = r.iter().map(|s| (1.0 + s).powi(-3)).collect();
        let h = GrowthFunction::tabulated(r, hv, 3.0).unwrap();
        let eps: f64 = 0.7;
        let inner = 0.5 * ((1.0 + eps).powi(-2) - (1.0 + last).powi(-2));
        let tail = (1.0 + last).powi(-3) * last / 2.0;
        assert_relative_eq!(tail_integral(&h, eps).unwrap(), inner + tail, max_relative = 1e-7);
        assert_relative_eq!(
            tail_integral(&h, 25.0).unwrap(),
            (1.0 + last).powi(-3) * last.powi(3) * 25f64.powi(-2) / 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn c1_examples() {
        let h = inv_square();
        assert_eq!(
            const_c1(&GrowthFunction::constant(1.0).unwrap(), 3, 0.1, 1.0, 0.3).unwrap(),
            0.3
        );
        assert_relative_eq!(const_c1(&h, 2, 0.25, 1.0, 0.0).unwrap(), 8.0, max_relative = 1e-14);
        assert_relative_eq!(const_c1(&h, 2, 0.25, 1.0, 0.5).unwrap(), 8.5, max_relative = 1e-14);
        assert_relative_eq!(const_c1(&h, 2, 1e-12, 1.0, 0.0).unwrap(), 2.0, max_relative = 1e-10);
    }

    #[test]
    fn c2_examples() {
        assert_eq!(const_c2(3, 0.5, 1.0, 0.1, 1.0, 0.2).unwrap(), 0.2);
        assert_relative_eq!(const_c2(2, 2.0, 1.0, 0.0, 1.0, 0.0).unwrap(), 2.0, max_relative = 1e-15);
        let near = const_c2(3, 1.0 + 1e-8, 1.0, 0.1, 1.0, 0.05).unwrap();
        assert!((near - 0.05).abs() < 1e-6);
    }

    #[test]
    fn c2_is_c1_for_its_power_law() {
        for &(n, b, r0, delta, eps) in &[(3usize, 2.5, 1.0, 0.1, 0.7), (5, 1.5, 3.0, 0.02, 2.0)] {
            let h = GrowthFunction::power_law(b, r0).unwrap();
            assert_relative_eq!(
                const_c2(n, b, r0, delta, eps, 0.01).unwrap(),
                const_c1(&h, n, delta, eps, 0.01).unwrap(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn c3_conventions() {
        let h = inv_square();
        let proof = const_c3(&h, 2, 1.0, 1.0, 0.0, C3Convention::Proof).unwrap();
        let statement = const_c3(&h, 2, 1.0, 1.0, 0.0, C3Convention::Statement).unwrap();
        assert_relative_eq!(proof, 6.0, max_relative = 1e-15);
        assert_relative_eq!(statement, 4.0, max_relative = 1e-15);
        let a0 = const_c3(&h, 4, 0.0, 2.0, 0.1, C3Convention::Proof).unwrap();
        assert_eq!(a0, const_c3(&h, 4, 0.0, 2.0, 0.1, C3Convention::Statement).unwrap());
        assert_relative_eq!(a0, 1.5 / tail_integral(&h, 2.0).unwrap() + 0.1, max_relative = 1e-15);
    }

    #[test]
    fn c4_examples() {
        assert_relative_eq!(
            const_c4(3, 3.0, 1.0, 0.0, 1.0, 0.0).unwrap(),
            16.0,
            max_relative = 1e-15
        );
        assert_eq!(const_c4(3, 0.5, 1.0, 0.2, 1.0, 0.07).unwrap(), 0.07);
        assert_relative_eq!(const_c4(2, 2.0, 1.0, 1.0, 1.0, 0.0).unwrap(), 6.0, max_relative = 1e-15);
        // The b > 2 branch ignores eps.
        assert_eq!(
            const_c4(3, 3.5, 2.0, 0.4, 0.1, 0.0).unwrap(),
            const_c4(3, 3.5, 2.0, 0.4, 7.0, 0.0).unwrap()
        );
    }

    #[test]
    fn c5_c6_examples() {
        let h = inv_square();
        assert_relative_eq!(const_c5(&h, 2, 1.0, 1.0, 0.0).unwrap(), 4.0, max_relative = 1e-15);
        assert_eq!(
            const_c5(&GrowthFunction::constant(2.0).unwrap(), 4, 3.0, 1.0, 0.4).unwrap(),
            0.4
        );
        assert_relative_eq!(
            const_c5(&h, 3, 1e-12, 1.0, 0.1).unwrap(),
            const_c3(&h, 3, 0.0, 1.0, 0.1, C3Convention::Proof).unwrap(),
            max_relative = 1e-10
        );
        assert_relative_eq!(
            const_c6(2, 1.0, 3.0, 1.0, 1.0, 0.0).unwrap(),
            16.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            const_c6(3, 1e-12, 3.0, 1.0, 1.0, 0.0).unwrap(),
            16.0,
            max_relative = 1e-10
        );
        assert_eq!(const_c6(3, 1.0, 1.0, 1.0, 1.0, 0.3).unwrap(), 0.3);
    }

    #[test]
    fn wan_examples() {
        assert_relative_eq!(wan_constant(3, 3.0, 1.0, 1.0).unwrap(), 16.0, max_relative = 1e-15);
        assert_relative_eq!(wan_constant(2, 2.0, 1.0, 1.0).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(wan_constant(3, 3.0, 2.0, 1.0).unwrap(), 32.0, max_relative = 1e-15);
        assert!(matches!(wan_constant(3, 1.5, 1.0, 1.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn qiu_and_cgt_examples() {
        let h = inv_square();
        assert_relative_eq!(qiu_delta2(&h, 2, 1.0, 1.0, 0.0).unwrap(), 6.0, max_relative = 1e-15);
        assert_relative_eq!(
            qiu_delta2(&h, 3, 0.0, 1.5, 0.1).unwrap(),
            const_c5(&h, 3, 0.0, 1.5, 0.1).unwrap(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            qiu_delta2(&h, 3, 0.7, 1.5, 0.1).unwrap(),
            const_c3(&h, 3, 0.7, 1.5, 0.1, C3Convention::Proof).unwrap(),
            max_relative = 1e-15
        );
        assert_relative_eq!(cgt_diameter(1.0, PI).unwrap(), E, max_relative = 1e-15);
        assert_relative_eq!(cgt_diameter(2.0, PI).unwrap(), 2.0 * E, max_relative = 1e-15);
        assert_relative_eq!(cgt_diameter(1.5, 1e12).unwrap(), 1.5, max_relative = 1e-11);
        assert!(cgt_diameter(1.0, 0.0).is_err());
    }

    #[test]
    fn epsilon_optimize_examples() {
        let (eps, value) = epsilon_optimize(OptimizedVariant::C6, 2, 1.0, 3.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(eps, 1.0, max_relative = 1e-6);
        assert_relative_eq!(value, 16.0, max_relative = 1e-6);
        let (eps, value) = epsilon_optimize(OptimizedVariant::C4, 3, 0.0, 3.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(eps, 1.0, max_relative = 1e-6);
        assert_relative_eq!(value, 16.0, max_relative = 1e-6);
        let (_, value) = epsilon_optimize(OptimizedVariant::C4, 3, 0.0, 3.0, 1.0, 1.0).unwrap();
        assert!(value <= const_c4(3, 3.0, 1.0, 1.0, 1.0, 0.0).unwrap() * (1.0 + 1e-12));
        assert!(epsilon_optimize(OptimizedVariant::C6, 3, 1.0, 2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn variant_parsing() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("cgt".parse::<Variant>().unwrap(), Variant::Cgt);
        assert!("C7".parse::<Variant>().is_err());
        assert_eq!("statement".parse::<C3Convention>().unwrap(), C3Convention::Statement);
    }

    #[test]
    fn params_validation() {
        let mut p = CriterionParams::new(Variant::C1, 3);
        assert!(p.validate().is_ok());
        p.eps1 = 0.0;
        assert!(p.validate().is_err());
        let mut p = CriterionParams::new(Variant::Cgt, 3);
        p.nu = 0.0;
        assert!(p.validate().is_err());
        let mut p = CriterionParams::new(Variant::Wan, 3);
        p.b = 1.5;
        assert!(p.validate().is_err());
        let mut p = CriterionParams::new(Variant::C5, 3);
        p.k = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn sphere_meets_c1_with_shifted_power_law() {
        let s3 = RadialManifold::sphere(3).unwrap();
        let mut p = CriterionParams::new(Variant::C1, 3);
        p.delta = 0.01;
        p.eps = 4.0;
        p.eps1 = 0.01;
        let h = GrowthFunction::power_law(2.0, 4.0).unwrap();
        let v = evaluate_criterion(&s3, &p, Some(&h), 50.0).unwrap();
        assert!(v.criterion_met && v.predicted_compact && !v.inconsistent);
        assert_relative_eq!(v.constant_used, 0.59 * 8.0 + 0.01, max_relative = 1e-14);
        assert!((v.window.1 - PI).abs() < 1e-5);
        assert!(v.cross_check.is_some());
    }

    #[test]
    fn sphere_with_unshifted_inverse_square_fails_near_pole() {
        // C1 ≈ 4.25 here, so C1·h(0) exceeds Ric_f = 2.
        let s3 = RadialManifold::sphere(3).unwrap();
        let mut p = CriterionParams::new(Variant::C1, 3);
        p.delta = 0.01;
        let v = evaluate_criterion(&s3, &p, Some(&inv_square()), 50.0).unwrap();
        assert_relative_eq!(v.constant_used, 4.25, max_relative = 1e-12);
        assert!(!v.criterion_met);
        assert!(v.first_violation.unwrap() < 0.5);
    }

    #[test]
    fn divergent_tail_criterion_on_sphere() {
        let s3 = RadialManifold::sphere(3).unwrap();
        let mut p = CriterionParams::new(Variant::C5, 3);
        p.eps1 = 0.5;
        let h = GrowthFunction::constant(1.0).unwrap();
        let v = evaluate_criterion(&s3, &p, Some(&h), 50.0).unwrap();
        assert_eq!(v.constant_used, 0.5);
        assert!(v.criterion_met);
        // ric = 0.5 with n_eff = 3: conjugate time π √(3/0.5), beyond π but
        // well inside the window.
        assert_relative_eq!(v.cross_check.unwrap(), PI * 6f64.sqrt(), max_relative = 1e-6);
    }

    #[test]
    fn euclidean_never_meets_a_criterion() {
        let e3 = RadialManifold::euclidean(3).unwrap();
        for variant in [
            Variant::C1,
            Variant::C2,
            Variant::C3,
            Variant::C4,
            Variant::C5,
            Variant::C6,
        ] {
            let p = CriterionParams::new(variant, 3);
            let v = evaluate_criterion(&e3, &p, Some(&inv_square()), 50.0).unwrap();
            assert!(!v.criterion_met, "{variant}");
            assert!(!v.inconsistent);
        }
    }

    #[test]
    fn hyperbolic_with_catalog_weights_never_meets_a_criterion() {
        let weights = [
            WeightFunction::zero(),
            WeightFunction::linear(0.3).unwrap(),
            WeightFunction::bounded_sine(0.2).unwrap(),
            WeightFunction::log_growth(1.0).unwrap(),
            WeightFunction::saturating_ramp(2.0).unwrap(),
            WeightFunction::algebraic_ramp(0.5, 2.0).unwrap(),
        ];
        for w in weights {
            let m = RadialManifold::hyperbolic(3).unwrap().with_weight(w);
            for variant in [Variant::C1, Variant::C3, Variant::C5] {
                let v = evaluate_criterion(&m, &CriterionParams::new(variant, 3), Some(&inv_square()), 50.0).unwrap();
                assert!(!v.criterion_met, "{} {variant}", m.name());
            }
        }
    }

    #[test]
    fn evaluate_rejects_bad_inputs() {
        let s3 = RadialManifold::sphere(3).unwrap();
        let p = CriterionParams::new(Variant::Wan, 3);
        assert!(evaluate_criterion(&s3, &p, None, 50.0).is_err());
        let p = CriterionParams::new(Variant::C1, 3);
        assert!(evaluate_criterion(&s3, &p, None, 50.0).is_err());
        assert!(evaluate_criterion_on_grid(&s3, &p, Some(&inv_square()), 50.0, 9).is_err());
        let p = CriterionParams::new(Variant::C1, 4);
        assert!(evaluate_criterion(&s3, &p, Some(&inv_square()), 50.0).is_err());
    }

    #[test]
    fn c4_note_reports_better_epsilon() {
        let m = RadialManifold::sphere(3).unwrap();
        let mut p = CriterionParams::new(Variant::C4, 3);
        p.a = 1.0;
        let v = evaluate_criterion(&m, &p, None, 50.0).unwrap();
        assert!(v.notes.iter().any(|n| n.starts_with("smaller C4")));
    }

    proptest! {
        #[test]
        fn optimizer_reproduces_closed_forms(n in 2usize..8, k in 0.1f64..5.0, b in 2.1f64..6.0, r0 in 0.2f64..5.0) {
            let (eps, value) = epsilon_optimize(OptimizedVariant::C6, n, k, b, r0, 0.0).unwrap();
            prop_assert!((eps / (r0 / (b - 2.0)) - 1.0).abs() < 1e-6);
            prop_assert!((value / const_c6(n, k, b, r0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-6);
            let (eps, value) = epsilon_optimize(OptimizedVariant::C4, n, 0.0, b, r0, 0.0).unwrap();
            prop_assert!((eps / (r0 / (b - 2.0)) - 1.0).abs() < 1e-6);
            prop_assert!((value / const_c4(n, b, r0, 0.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-6);
        }

        #[test]
        fn c6_at_small_k_is_wan(n in 2usize..8, b in 2.05f64..7.0, r0 in 0.1f64..4.0) {
            let c6 = const_c6(n, 1e-14, b, r0, 1.0, 0.0).unwrap();
            let wan = wan_constant(n, b, r0, 1.0).unwrap();
            prop_assert!((c6 / wan - 1.0).abs() < 1e-9);
        }

        #[test]
        fn constants_decrease_in_tail_and_increase_in_eps1(
            n in 2usize..8, delta in 0.0f64..1.0, eps in 0.1f64..5.0, eps1 in 0.0f64..1.0,
            b1 in 1.5f64..4.0, db in 0.1f64..2.0,
        ) {
            // Lowering b (same r0) enlarges ∫h.
            let heavy = GrowthFunction::power_law(b1, 1.0).unwrap();
            let light = GrowthFunction::power_law(b1 + db, 1.0).unwrap();
            prop_assert!(tail_integral(&heavy, eps).unwrap() > tail_integral(&light, eps).unwrap());
            for (x, y) in [
                (const_c1(&heavy, n, delta, eps, eps1).unwrap(), const_c1(&light, n, delta, eps, eps1).unwrap()),
                (const_c3(&heavy, n, delta, eps, eps1, C3Convention::Proof).unwrap(),
                 const_c3(&light, n, delta, eps, eps1, C3Convention::Proof).unwrap()),
                (const_c5(&heavy, n, delta, eps, eps1).unwrap(), const_c5(&light, n, delta, eps, eps1).unwrap()),
                (qiu_delta2(&heavy, n, delta, eps, eps1).unwrap(), qiu_delta2(&light, n, delta, eps, eps1).unwrap()),
            ] {
                prop_assert!(x <= y);
            }
            let more = eps1 + 0.1;
            prop_assert!(const_c1(&heavy, n, delta, eps, more).unwrap() > const_c1(&heavy, n, delta, eps, eps1).unwrap());
            prop_assert!(const_c2(n, b1, 1.0, delta, eps, more).unwrap() > const_c2(n, b1, 1.0, delta, eps, eps1).unwrap());
            prop_assert!(const_c5(&heavy, n, delta, eps, more).unwrap() > const_c5(&heavy, n, delta, eps, eps1).unwrap());
        }

        #[test]
        fn divergent_tail_gives_eps1(n in 2usize..8, c in 0.01f64..10.0, eps in 0.01f64..10.0, eps1 in 0.001f64..10.0, x in 0.0f64..2.0) {
            let h = GrowthFunction::constant(c).unwrap();
            prop_assert_eq!(const_c1(&h, n, x, eps, eps1).unwrap(), eps1);
            prop_assert_eq!(const_c3(&h, n, x, eps, eps1, C3Convention::Proof).unwrap(), eps1);
            prop_assert_eq!(const_c5(&h, n, x, eps, eps1).unwrap(), eps1);
        }
    }
}
