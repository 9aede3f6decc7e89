//! Typed scenario built from a [`Config`], validated before any computation.

use std::collections::BTreeMap;
use std::path::PathBuf;

use myers_core::radial::WeightFunction;
use myers_core::{C3Convention, CriterionParams, GridOptions, GrowthFunction, RadialManifold, Variant, WarpProfile};

use crate::config::{Config, Entry};
use crate::error::CliError;

/// Checks accepted by `compare`.
pub const COMPARE_CHECKS: &[&str] = &["thm21", "thm22", "mf-bounds", "mf-bounds-k", "ibp-chain"];

pub const MANIFOLDS: &[&str] = &[
    "sphere",
    "euclidean",
    "hyperbolic",
    "space-form",
    "perturbed-sine",
    "perturbed-linear",
    "tabulated",
];

pub const WEIGHTS: &[&str] = &[
    "zero",
    "linear",
    "bounded-sine",
    "log-growth",
    "saturating-ramp",
    "algebraic-ramp",
    "tabulated",
];

pub const GROWTHS: &[&str] = &["constant", "power-law", "tabulated"];

pub const WORKFLOWS: &[&str] = &["compare", "constants", "criterion", "ambrose"];

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub manifold: String,
    pub n: usize,
    pub profile_curvature: Option<f64>,
    pub beta: Option<f64>,
    pub profile_file: Option<PathBuf>,
    pub weight: String,
    pub weight_scale: Option<f64>,
    pub weight_alpha: f64,
    pub weight_file: Option<PathBuf>,
    pub growth: String,
    pub growth_c: f64,
    pub growth_file: Option<PathBuf>,
    pub growth_tail_power: f64,
    pub variant: Option<String>,
    pub delta: f64,
    pub a: f64,
    pub k: f64,
    pub h: f64,
    pub b: f64,
    pub r0: f64,
    pub nu: f64,
    pub delta1: f64,
    pub eps: f64,
    pub eps1: f64,
    pub c: f64,
    pub alpha: f64,
    pub t: Option<f64>,
    pub step: f64,
    pub r_max_test: f64,
    pub t_probe: f64,
    pub c3_convention: C3Convention,
    /// `None` keeps the catalog value.
    pub known_compact: Option<Option<bool>>,
    pub workflow: Option<String>,
    /// Source line of each key, for diagnostics.
    pub lines: BTreeMap<String, usize>,
}

struct Reader<'a> {
    cfg: &'a Config,
}

impl<'a> Reader<'a> {
    fn entry(&self, key: &str) -> Result<Option<&'a Entry>, CliError> {
        match self.cfg.get(key) {
            Some(e) if e.is_list() => Err(field(key, e, "lists are only allowed with `sweep`")),
            other => Ok(other),
        }
    }

    fn string(&self, key: &str, allowed: &[&str]) -> Result<Option<String>, CliError> {
        let Some(e) = self.entry(key)? else {
            return Ok(None);
        };
        if !allowed.is_empty() && !allowed.contains(&e.value.as_str()) {
            return Err(field(
                key,
                e,
                &format!("expected one of {}, got `{}`", allowed.join("|"), e.value),
            ));
        }
        Ok(Some(e.value.clone()))
    }

    fn real(&self, key: &str) -> Result<Option<f64>, CliError> {
        let Some(e) = self.entry(key)? else {
            return Ok(None);
        };
        parse_real(&e.value)
            .map(Some)
            .ok_or_else(|| field(key, e, &format!("`{}` is not a number", e.value)))
    }

    fn real_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    fn path(&self, key: &str) -> Result<Option<PathBuf>, CliError> {
        let Some(e) = self.entry(key)? else {
            return Ok(None);
        };
        let p = PathBuf::from(&e.value);
        Ok(Some(match self.cfg.base_dir() {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p,
        }))
    }
}

fn field(key: &str, e: &Entry, message: &str) -> CliError {
    CliError::Field {
        key: key.to_string(),
        line: e.line,
        message: message.to_string(),
    }
}

fn invalid(cfg: &Config, key: &str, message: impl Into<String>) -> CliError {
    CliError::Field {
        key: key.to_string(),
        line: cfg.get(key).and_then(|e| e.line),
        message: message.into(),
    }
}

/// Parses a real number, also accepting `pi`, `<x>*pi` and `pi/<x>`.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let pi = std::f64::consts::PI;
    if s.eq_ignore_ascii_case("pi") {
        return Some(pi);
    }
    if let Some(factor) = s.strip_suffix("*pi") {
        return factor.trim().parse::<f64>().ok().map(|f| f * pi);
    }
    if let Some(divisor) = s.strip_prefix("pi/") {
        return divisor.trim().parse::<f64>().ok().map(|d| pi / d);
    }
    None
}

impl Scenario {
    pub fn from_config(cfg: &Config) -> Result<Self, CliError> {
        let r = Reader { cfg };
        let n_real = r.real_or("n", 3.0)?;
        if !(n_real >= 2.0 && n_real.fract() == 0.0 && n_real < 1e6) {
            return Err(invalid(
                cfg,
                "n",
                format!("dimension must be an integer >= 2, got {n_real}"),
            ));
        }
        let known_compact = match r.string("known_compact", &["true", "false", "unknown"])?.as_deref() {
            None => None,
            Some("true") => Some(Some(true)),
            Some("false") => Some(Some(false)),
            Some(_) => Some(None),
        };
        let c3_convention = match r.string("c3_convention", &["statement", "proof"])? {
            Some(v) => v.parse()?,
            None => C3Convention::Proof,
        };
        let s = Scenario {
            manifold: r.string("manifold", MANIFOLDS)?.unwrap_or_else(|| "sphere".into()),
            n: n_real as usize,
            profile_curvature: r.real("profile_curvature")?,
            beta: r.real("beta")?,
            profile_file: r.path("profile_file")?,
            weight: r.string("weight", WEIGHTS)?.unwrap_or_else(|| "zero".into()),
            weight_scale: r.real("weight_scale")?,
            weight_alpha: r.real_or("weight_alpha", 2.0)?,
            weight_file: r.path("weight_file")?,
            growth: r.string("growth", GROWTHS)?.unwrap_or_else(|| "power-law".into()),
            growth_c: r.real_or("growth_c", 1.0)?,
            growth_file: r.path("growth_file")?,
            growth_tail_power: r.real_or("growth_tail_power", 2.0)?,
            variant: r.string("variant", &[])?,
            delta: r.real_or("delta", 0.1)?,
            a: r.real_or("a", 0.0)?,
            k: r.real_or("k", 1.0)?,
            h: r.real_or("H", 0.0)?,
            b: r.real_or("b", 3.0)?,
            r0: r.real_or("r0", 1.0)?,
            nu: r.real_or("nu", 1.0)?,
            delta1: r.real_or("delta1", 0.0)?,
            eps: r.real_or("eps", 1.0)?,
            eps1: r.real_or("eps1", 0.01)?,
            c: r.real_or("C", 1.0)?,
            alpha: r.real_or("alpha", 2.0)?,
            t: r.real("t")?,
            step: r.real_or("step", 1e-2)?,
            r_max_test: r.real_or("r_max_test", 50.0)?,
            t_probe: r.real_or("t_probe", 20.0)?,
            c3_convention,
            known_compact,
            workflow: r.string("workflow", WORKFLOWS)?,
            lines: cfg
                .entries()
                .filter_map(|(k, e)| e.line.map(|l| (k.to_string(), l)))
                .collect(),
        };
        if !(s.step > 0.0 && s.step.is_finite()) {
            return Err(invalid(cfg, "step", format!("must be positive, got {}", s.step)));
        }
        if !(s.r_max_test > 0.0 && s.r_max_test.is_finite()) {
            return Err(invalid(
                cfg,
                "r_max_test",
                format!("must be positive, got {}", s.r_max_test),
            ));
        }
        if !(s.t_probe > 1.0 && s.t_probe.is_finite()) {
            return Err(invalid(cfg, "t_probe", format!("must exceed 1, got {}", s.t_probe)));
        }
        Ok(s)
    }

    pub fn err(&self, key: &str, message: impl Into<String>) -> CliError {
        CliError::Field {
            key: key.to_string(),
            line: self.lines.get(key).copied(),
            message: message.into(),
        }
    }

    fn require(&self, value: Option<f64>, key: &str) -> Result<f64, CliError> {
        value.ok_or_else(|| {
            self.err(
                key,
                format!("required for manifold `{}` / weight `{}`", self.manifold, self.weight),
            )
        })
    }

    fn file(&self, value: &Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
        value
            .clone()
            .ok_or_else(|| self.err(key, "required for tabulated data"))
    }

    pub fn build_weight(&self) -> Result<WeightFunction, CliError> {
        let scale = || self.require(self.weight_scale, "weight_scale");
        Ok(match self.weight.as_str() {
            "zero" => WeightFunction::zero(),
            "linear" => WeightFunction::linear(scale()?)?,
            "bounded-sine" => WeightFunction::bounded_sine(scale()?)?,
            "log-growth" => WeightFunction::log_growth(scale()?)?,
            "saturating-ramp" => WeightFunction::saturating_ramp(scale()?)?,
            "algebraic-ramp" => WeightFunction::algebraic_ramp(scale()?, self.weight_alpha)?,
            "tabulated" => WeightFunction::from_table_file(&self.file(&self.weight_file, "weight_file")?)?,
            other => return Err(CliError::Usage(format!("unknown weight `{other}`"))),
        })
    }

    pub fn build_manifold(&self) -> Result<RadialManifold, CliError> {
        let n = self.n;
        let base = match self.manifold.as_str() {
            "sphere" => RadialManifold::sphere(n)?,
            "euclidean" => RadialManifold::euclidean(n)?,
            "hyperbolic" => RadialManifold::hyperbolic(n)?,
            "space-form" => RadialManifold::space_form(n, self.require(self.profile_curvature, "profile_curvature")?)?,
            "perturbed-sine" => RadialManifold::perturbed_sine(n, self.require(self.beta, "beta")?)?,
            "perturbed-linear" => RadialManifold::perturbed_linear(n, self.require(self.beta, "beta")?)?,
            "tabulated" => {
                let profile = WarpProfile::from_table_file(&self.file(&self.profile_file, "profile_file")?)?;
                RadialManifold::new(n, profile, WeightFunction::zero())?
            }
            other => return Err(CliError::Usage(format!("unknown manifold `{other}`"))),
        };
        let mut m = base.with_weight(self.build_weight()?);
        if let Some(kc) = self.known_compact {
            m = m.with_known_compact(kc);
        }
        Ok(m)
    }

    pub fn build_growth(&self) -> Result<GrowthFunction, CliError> {
        Ok(match self.growth.as_str() {
            "constant" => GrowthFunction::constant(self.growth_c)?,
            "power-law" => GrowthFunction::power_law(self.b, self.r0)?,
            "tabulated" => {
                GrowthFunction::from_table_file(&self.file(&self.growth_file, "growth_file")?, self.growth_tail_power)?
            }
            other => return Err(CliError::Usage(format!("unknown growth function `{other}`"))),
        })
    }

    pub fn grid(&self) -> Result<GridOptions, CliError> {
        Ok(GridOptions::new(self.step, self.r_max_test)?)
    }

    /// The `variant` key, required by every workflow.
    pub fn variant_name(&self, workflow: &str, allowed: &[&str]) -> Result<&str, CliError> {
        self.variant
            .as_deref()
            .ok_or_else(|| self.err("variant", format!("required for {workflow} ({})", allowed.join("|"))))
    }

    pub fn criterion_variant(&self, workflow: &str) -> Result<Variant, CliError> {
        let names: Vec<&str> = Variant::ALL.iter().map(Variant::as_str).collect();
        let name = self.variant_name(workflow, &names)?;
        name.parse::<Variant>().map_err(|_| {
            self.err(
                "variant",
                format!("{workflow} expects one of {}, got `{name}`", names.join("|")),
            )
        })
    }

    pub fn criterion_params(&self, variant: Variant) -> Result<CriterionParams, CliError> {
        let p = CriterionParams {
            variant,
            n: self.n,
            delta: self.delta,
            a: self.a,
            k: self.k,
            b: self.b,
            r0: self.r0,
            nu: self.nu,
            delta1: self.delta1,
            eps: self.eps,
            eps1: self.eps1,
            c3_convention: self.c3_convention,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds every object the workflow needs, so that invalid input is
    /// reported before any computation starts.
    pub fn validate_for(&self, workflow: &str) -> Result<(), CliError> {
        self.build_manifold()?;
        match workflow {
            "compare" => {
                let check = self.variant_name("compare", COMPARE_CHECKS)?;
                if !COMPARE_CHECKS.contains(&check) {
                    return Err(self.err(
                        "variant",
                        format!("compare expects one of {}, got `{check}`", COMPARE_CHECKS.join("|")),
                    ));
                }
                self.grid()?;
                if check == "ibp-chain" && self.t.is_none() {
                    return Err(self.err("t", "required for ibp-chain"));
                }
            }
            "constants" | "criterion" => {
                let v = self.criterion_variant(workflow)?;
                self.criterion_params(v)?;
                if workflow == "criterion" && !v.is_evaluable() {
                    return Err(self.err("variant", format!("criterion expects C1..C6, got `{v}`")));
                }
                if !v.uses_power_law() {
                    self.build_growth()?;
                }
            }
            "ambrose" => {
                if !(self.c > 0.0) {
                    return Err(self.err("C", format!("must be positive, got {}", self.c)));
                }
                if !(self.alpha > 1.0) {
                    return Err(self.err("alpha", format!("must exceed 1, got {}", self.alpha)));
                }
            }
            other => return Err(CliError::Usage(format!("unknown workflow `{other}`"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(text: &str) -> Result<Scenario, CliError> {
        Scenario::from_config(&Config::parse(text).unwrap())
    }

    #[test]
    fn defaults_and_constants() {
        let s = scenario("nu = pi\nH = pi/4\nC = 2*pi\n").unwrap();
        assert_eq!(s.manifold, "sphere");
        assert_eq!(s.n, 3);
        assert_eq!(s.nu, std::f64::consts::PI);
        assert_eq!(s.h, std::f64::consts::FRAC_PI_4);
        assert_eq!(s.c, 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn malformed_values_cite_their_line() {
        let err = scenario("n = 3\ndelta = abc\n").unwrap_err();
        assert_eq!(err.to_string(), "config line 2: `delta`: `abc` is not a number");
        let err = scenario("manifold = torus\n").unwrap_err();
        assert!(err.to_string().starts_with("config line 1: `manifold`"));
        assert!(scenario("n = 2.5\n").is_err());
        assert!(scenario("delta = 0.1, 0.2\n").is_err());
    }

    #[test]
    fn building_checks_required_parameters() {
        let s = scenario("manifold = perturbed-sine\n").unwrap();
        assert!(s.build_manifold().is_err());
        let s = scenario("manifold = perturbed-sine\nbeta = 0.1\nweight = linear\nweight_scale = 0.2\n").unwrap();
        let m = s.build_manifold().unwrap();
        assert_eq!(m.known_compact(), Some(true));
        let s = scenario("manifold = euclidean\nknown_compact = unknown\n").unwrap();
        assert_eq!(s.build_manifold().unwrap().known_compact(), None);
    }

    #[test]
    fn workflow_validation() {
        let s = scenario("variant = thm21\n").unwrap();
        assert!(s.validate_for("compare").is_ok());
        assert!(s.validate_for("criterion").is_err());
        let s = scenario("variant = C4\nb = 3\n").unwrap();
        assert!(s.validate_for("constants").is_ok());
        let s = scenario("variant = Wan\nb = 1.5\n").unwrap();
        assert!(s.validate_for("constants").is_err());
        let s = scenario("variant = ibp-chain\n").unwrap();
        assert!(s.validate_for("compare").is_err());
    }
}
