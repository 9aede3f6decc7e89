//! Ambrose-type compactness: divergence of `∫ Ric_f` along rays together with
//! an upper bound `f'(t) ≤ C(1 - t^{-α})`.
//!
//! The heart of the argument is a doubling sequence `t_{ℓ+1} = t_ℓ + 2^{1-ℓ}`
//! accumulating at `T = t_1 + 2`, along which `-m(t_ℓ) ≥ 2^ℓ n`. Since `m`
//! would then be unbounded before `T`, a smooth solution cannot exist and the
//! Riccati trajectory must blow up first. [`blowup_sequence_verify`] checks
//! the terms against an integrated trajectory.
//!
//! Divergence of an improper integral cannot be decided from finite data, so
//! [`ambrose_diagnosis`] only classifies the trend of window increments: with
//! `I1 = ∫_T^{2T} Ric_f` and `I2 = ∫_{2T}^{4T} Ric_f`, the trend is
//! *diverging* when `I1 > 0` and `I2/I1 > 0.5`, *converging* when
//! `0 ≤ I2/I1 ≤ 0.5` or both increments vanish, and *inconclusive* otherwise.
//! The rule is a heuristic.

use crate::comparison::TOLERANCE;
use crate::numerics::{integrate, Quadrature};
use crate::radial::{RadialManifold, WeightFunction, R_MIN};
use crate::riccati::{integrate_jacobi, RiccatiTrajectory, DEFAULT_STEP};
use crate::{Error, Result};

/// Largest sequence index examined.
pub const MAX_TERMS: usize = 50;

/// Increments below this magnitude count as zero in the trend rule.
const INCREMENT_TOL: f64 = 1e-12;

/// `min_{t ∈ [1, t_max]} C(1 - t^{-α}) - f'(t)` on a grid of spacing at most
/// `1e-3`. The condition holds when the result is at least `-1e-9`.
pub fn check_fprime_condition(w: &WeightFunction, c: f64, alpha: f64, t_max: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param(format!("C must be positive, got {c}")));
    }
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::param(format!("alpha must exceed 1, got {alpha}")));
    }
    if !(t_max > 1.0 && t_max.is_finite()) {
        return Err(Error::param(format!("t_max must exceed 1, got {t_max}")));
    }
    let intervals = (((t_max - 1.0) / 1e-3).ceil() as usize).clamp(1000, 1_000_000);
    let slack = (0..=intervals)
        .map(|i| {
            let t = 1.0 + (t_max - 1.0) * i as f64 / intervals as f64;
            c * (1.0 - t.powf(-alpha)) - w.f_prime(t)
        })
        .fold(f64::INFINITY, f64::min);
    Ok(slack)
}

/// `∫_a^b g` split at decades so integrands that are large near the pole are
/// resolved.
fn ray_integral<G: Fn(f64) -> f64>(g: G, a: f64, b: f64) -> Result<f64> {
    let opts = Quadrature::default();
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (lo * 10.0).min(b);
        total += integrate(&g, lo, hi, opts)?;
        lo = hi;
    }
    Ok(total)
}

fn ric_f_fn(m: &RadialManifold) -> impl Fn(f64) -> f64 + '_ {
    move |r| m.ric_f(r).unwrap_or(f64::NAN)
}

/// `∫_0^T Ric_f(γ', γ') dt` along the radial ray. The quadrature runs over
/// `[R_MIN, T]`; for weights smooth at the pole the missing piece is
/// approximated by `R_MIN · Ric_f(R_MIN)`.
pub fn partial_ricci_integral(m: &RadialManifold, t: f64) -> Result<f64> {
    let r_dom = m.r_dom();
    if !(t > 0.0) || t > r_dom {
        return Err(Error::domain(
            "partial Ricci integral",
            t,
            format!("requires 0 < T <= {r_dom}"),
        ));
    }
    let end = if r_dom.is_finite() { t.min(r_dom - R_MIN) } else { t };
    if end <= R_MIN {
        return Ok(0.0);
    }
    let mut total = ray_integral(ric_f_fn(m), R_MIN, end)?;
    if m.weight().regular_at_pole() {
        total += R_MIN * m.ric_f(R_MIN)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivergenceTrend {
    Diverging,
    Converging,
    Inconclusive,
}

impl DivergenceTrend {
    pub fn as_str(&self) -> &'static str {
        match self {
            DivergenceTrend::Diverging => "diverging",
            DivergenceTrend::Converging => "converging",
            DivergenceTrend::Inconclusive => "inconclusive",
        }
    }

    /// Applies the increment rule described in the module docs.
    pub fn classify(first: f64, second: f64) -> Self {
        if first.abs() <= INCREMENT_TOL && second.abs() <= INCREMENT_TOL {
            return DivergenceTrend::Converging;
        }
        if first <= INCREMENT_TOL {
            return DivergenceTrend::Inconclusive;
        }
        let ratio = second / first;
        if ratio > 0.5 {
            DivergenceTrend::Diverging
        } else if ratio >= 0.0 {
            DivergenceTrend::Converging
        } else {
            DivergenceTrend::Inconclusive
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbroseReport {
    pub fprime_slack: f64,
    pub fprime_condition_met: bool,
    /// `(T, ∫_0^T Ric_f)` at the doubling probes `T, 2T, 4T`.
    pub probes: Vec<(f64, f64)>,
    /// `(∫_T^{2T} Ric_f, ∫_{2T}^{4T} Ric_f)`.
    pub increments: (f64, f64),
    pub trend: DivergenceTrend,
    /// First conjugate point along the ray, searched up to `r_dom + 0.1`
    /// (or `T_probe` on unbounded rays).
    pub conjugate_time: Option<f64>,
    pub r_dom: f64,
    pub hypotheses_hold: bool,
    pub predicted_compact: bool,
    /// Hypotheses hold on a manifold known to be non-compact.
    pub alarm: bool,
    pub notes: Vec<String>,
}

/// Bundles the `f'` condition, the trend of `∫ Ric_f` over the doubling probes
/// `T_probe/4, T_probe/2, T_probe`, and a conjugate-point search along the ray.
pub fn ambrose_diagnosis(m: &RadialManifold, c: f64, alpha: f64, t_probe: f64) -> Result<AmbroseReport> {
    let fprime_slack = check_fprime_condition(m.weight(), c, alpha, t_probe)?;
    let fprime_condition_met = fprime_slack >= -TOLERANCE;
    let mut notes = Vec::new();

    let r_dom = m.r_dom();
    let mut reach = t_probe;
    if r_dom.is_finite() && reach > r_dom - R_MIN {
        reach = r_dom - R_MIN;
        notes.push(format!("probes clamped to the radial domain, T_probe = {reach:.6e}"));
    }
    let base = reach / 4.0;
    let probes = [base, 2.0 * base, 4.0 * base]
        .iter()
        .map(|&t| partial_ricci_integral(m, t).map(|v| (t, v)))
        .collect::<Result<Vec<_>>>()?;
    let first = ray_integral(ric_f_fn(m), base, 2.0 * base)?;
    let second = ray_integral(ric_f_fn(m), 2.0 * base, 4.0 * base)?;
    let trend = DivergenceTrend::classify(first, second);
    notes.push("divergence trend is a finite-window heuristic".to_string());

    let (t_max, hi) = if r_dom.is_finite() {
        (r_dom + 0.1, r_dom - R_MIN)
    } else {
        (t_probe, f64::INFINITY)
    };
    let ricci = |t: f64| m.ricci_radial(t.clamp(R_MIN, hi)).unwrap_or(f64::NAN);
    let conjugate_time = integrate_jacobi(ricci, (m.dim() - 1) as f64, t_max, DEFAULT_STEP)?.conjugate_time();

    let hypotheses_hold = fprime_condition_met && trend == DivergenceTrend::Diverging;
    let alarm = hypotheses_hold && m.known_compact() == Some(false);
    if alarm {
        notes.push("hypotheses hold on a manifold known to be non-compact".to_string());
    }
    Ok(AmbroseReport {
        fprime_slack,
        fprime_condition_met,
        probes,
        increments: (first, second),
        trend,
        conjugate_time,
        r_dom,
        hypotheses_hold,
        predicted_compact: hypotheses_hold,
        alarm,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceStatus {
    /// The sequence was followed to blow-up or to the last index.
    Completed,
    /// The integral inequality does not hold at `t1`; nothing is asserted.
    PreconditionFailed,
    /// The trajectory ends before blow-up and before the accumulation point.
    Truncated,
}

impl SequenceStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SequenceStatus::Completed => "completed",
            SequenceStatus::PreconditionFailed => "precondition_failed",
            SequenceStatus::Truncated => "truncated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceTerm {
    pub ell: usize,
    pub t: f64,
    /// `2^ℓ n`.
    pub lower_bound: f64,
    /// `-m(t_ℓ)` read from the trajectory.
    pub observed: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupSequenceReport {
    pub t1: f64,
    /// Accumulation point `t1 + 2`.
    pub big_t: f64,
    /// `-m(t1) - (1/(n-1)) ∫_1^{t1} m² - 2n`.
    pub precondition_margin: f64,
    pub terms: Vec<SequenceTerm>,
    pub blowup_time: Option<f64>,
    pub status: SequenceStatus,
    /// Every term holds and the trajectory is smooth through `T`.
    pub contradiction: bool,
}

impl BlowupSequenceReport {
    /// Each satisfied term is followed by a satisfied term or by blow-up
    /// before the next sequence time.
    pub fn induction_holds(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, term)| {
            if !term.satisfied {
                return true;
            }
            match self.terms.get(i + 1) {
                Some(next) => next.satisfied,
                None => match self.blowup_time {
                    Some(tb) => tb <= term.t + 2f64.powi(1 - term.ell as i32),
                    None => term.ell == MAX_TERMS || self.status == SequenceStatus::Truncated,
                },
            }
        })
    }
}

/// `t_1, …, t_count` by the recursion `t_{ℓ+1} = t_ℓ + 2^{1-ℓ}`.
pub fn sequence_times(t1: f64, count: usize) -> Vec<f64> {
    let mut times = Vec::with_capacity(count);
    let mut t = t1;
    for ell in 1..=count {
        times.push(t);
        t += 2f64.powi(1 - ell as i32);
    }
    times
}

/// `∫_a^b m²` by the trapezoid rule on the trajectory samples, with the
/// endpoints read from the interpolant.
fn integral_m_squared(traj: &RiccatiTrajectory, interp: &crate::numerics::MonotoneCubic, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut points = vec![(a, interp.eval(a))];
    points.extend(
        traj.samples()
            .iter()
            .filter(|s| s.t > a && s.t < b && s.m.is_finite())
            .map(|s| (s.t, s.m)),
    );
    points.push((b, interp.eval(b)));
    points
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 * w[0].1 + w[1].1 * w[1].1))
        .sum()
}

/// Follows the doubling sequence from `t1` along `traj` and compares
/// `-m(t_ℓ)` with `2^ℓ n`. The trajectory must be defined from `t = 1`.
pub fn blowup_sequence_verify(traj: &RiccatiTrajectory, n: usize, t1: f64) -> Result<BlowupSequenceReport> {
    if n < 2 {
        return Err(Error::param(format!("dimension must be at least 2, got {n}")));
    }
    if !(t1 >= 1.0 && t1.is_finite()) {
        return Err(Error::param(format!("t1 must be at least 1, got {t1}")));
    }
    if traj.start() > 1.0 + 1e-12 {
        return Err(Error::param(format!("trajectory starts at {} > 1", traj.start())));
    }
    let big_t = t1 + 2.0;
    let blowup_time = traj.blowup_time();
    let mut report = BlowupSequenceReport {
        t1,
        big_t,
        precondition_margin: f64::NAN,
        terms: Vec::new(),
        blowup_time,
        status: SequenceStatus::Truncated,
        contradiction: false,
    };
    if traj.end() < t1 {
        return Ok(report);
    }

    let interp = traj.m_interpolant()?;
    let nf = n as f64;
    let start = traj.start().max(1.0);
    let rhs = integral_m_squared(traj, &interp, start, t1) / (nf - 1.0) + 2.0 * nf;
    report.precondition_margin = -interp.eval(t1) - rhs;
    if report.precondition_margin < -TOLERANCE * rhs.abs().max(1.0) {
        report.status = SequenceStatus::PreconditionFailed;
        return Ok(report);
    }

    report.status = SequenceStatus::Completed;
    for (i, t) in sequence_times(t1, MAX_TERMS).into_iter().enumerate() {
        if blowup_time.is_some_and(|tb| t >= tb) {
            break;
        }
        if t > traj.end() {
            if blowup_time.is_none() {
                report.status = SequenceStatus::Truncated;
            }
            break;
        }
        let ell = i + 1;
        let lower_bound = 2f64.powi(ell as i32) * nf;
        let observed = -interp.eval(t);
        report.terms.push(SequenceTerm {
            ell,
            t,
            lower_bound,
            observed,
            satisfied: observed >= lower_bound * (1.0 - 1e-9),
        });
    }
    report.contradiction = report.status == SequenceStatus::Completed
        && blowup_time.is_none()
        && traj.end() >= big_t
        && !report.terms.is_empty()
        && report.terms.iter().all(|t| t.satisfied);
    Ok(report)
}
