//! Grid verification of the f-mean curvature comparison bounds.
//!
//! Every check samples a window `[R_MIN, end]` along the radial geodesic and
//! reports two minima: the hypothesis margin and the conclusion slack. A check
//! whose hypothesis fails is reported as such and never judged on its
//! conclusion, since the corresponding statement says nothing there.

use crate::model_space::{m_h_effective, sn, sn_prime, valid_range, ModelSpaceParams, Window};
use crate::radial::{RadialManifold, R_MIN};
use crate::{Error, Result};

/// Slack below `-TOLERANCE` counts as a violation.
pub const TOLERANCE: f64 = 1e-9;

/// Windows with fewer points than this are resampled with a smaller step.
const MIN_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub step: f64,
    /// Cap on the window end for unbounded windows.
    pub r_max_test: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            step: 1e-2,
            r_max_test: 50.0,
        }
    }
}

impl GridOptions {
    pub fn new(step: f64, r_max_test: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::param(format!("grid step must be positive, got {step}")));
        }
        if !(r_max_test > R_MIN && r_max_test.is_finite()) {
            return Err(Error::param(format!(
                "r_max_test must be finite and exceed {R_MIN}, got {r_max_test}"
            )));
        }
        Ok(GridOptions { step, r_max_test })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    HypothesisViolated,
    ConclusionViolated,
    /// The hypothesis window contains no admissible radius.
    EmptyWindow,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HypothesisViolated => "hypothesis_violated",
            Verdict::ConclusionViolated => "conclusion_violated",
            Verdict::EmptyWindow => "empty_window",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub t: f64,
    /// The quantity being bounded, `m_f(t)`.
    pub lhs: f64,
    /// The upper bound at `t`.
    pub rhs: f64,
    /// Conclusion slack at `t`; for two-sided checks the smaller of the two.
    pub slack: f64,
    pub hypothesis: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub window: (f64, f64),
    pub hypothesis_slack: f64,
    pub conclusion_slack: f64,
    pub grid: Vec<GridPoint>,
    pub verdict: Verdict,
}

fn grid_points(end: f64, step: f64) -> Vec<f64> {
    let start = R_MIN;
    if !(end > start) {
        return Vec::new();
    }
    let mut step = step;
    if (end - start) / step < (MIN_POINTS - 1) as f64 {
        step = (end - start) / (MIN_POINTS - 1) as f64;
    }
    let count = ((end - start) / step).floor() as usize;
    let mut points: Vec<f64> = (0..=count).map(|i| start + i as f64 * step).collect();
    if end - points[points.len() - 1] > 1e-12 * end.max(1.0) {
        points.push(end);
    } else {
        let last = points.len() - 1;
        points[last] = end;
    }
    points
}

/// Window end: the hypothesis window, the open geometric domain and the test cap.
fn window_end(m: &RadialManifold, window: f64, opts: &GridOptions) -> f64 {
    let r_dom = m.r_dom();
    let dom = if r_dom.is_finite() { r_dom - R_MIN } else { r_dom };
    window.min(dom).min(opts.r_max_test)
}

fn run_check<H, C>(end: f64, opts: &GridOptions, hypothesis: H, conclusion: C) -> Result<ComparisonReport>
where
    H: Fn(f64) -> Result<f64>,
    C: Fn(f64) -> Result<(f64, f64, f64)>,
{
    let ts = grid_points(end, opts.step);
    if ts.is_empty() {
        return Ok(ComparisonReport {
            window: (R_MIN, end),
            hypothesis_slack: f64::NAN,
            conclusion_slack: f64::NAN,
            grid: Vec::new(),
            verdict: Verdict::EmptyWindow,
        });
    }
    let mut grid = Vec::with_capacity(ts.len());
    for t in ts {
        let hyp = hypothesis(t)?;
        let (lhs, rhs, slack) = conclusion(t)?;
        grid.push(GridPoint {
            t,
            lhs,
            rhs,
            slack,
            hypothesis: hyp,
        });
    }
    let hypothesis_slack = grid.iter().map(|p| p.hypothesis).fold(f64::INFINITY, f64::min);
    let conclusion_slack = grid.iter().map(|p| p.slack).fold(f64::INFINITY, f64::min);
    let verdict = if hypothesis_slack < -TOLERANCE {
        Verdict::HypothesisViolated
    } else if conclusion_slack < -TOLERANCE {
        Verdict::ConclusionViolated
    } else {
        Verdict::Holds
    };
    Ok(ComparisonReport {
        window: (R_MIN, end),
        hypothesis_slack,
        conclusion_slack,
        grid,
        verdict,
    })
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite and non-negative, got {v}")))
    }
}

/// `m_f(t) ≤ m_H(t)(1 + 4δ(t+1)/(n-1))` under `Ric_f ≥ (n-1)H` and
/// `|f| ≤ δ(r+1)`, on `t ≤ π/(4√H)` when `H > 0`. `δ = 0` is accepted as the
/// limiting case.
pub fn verify_thm21(m: &RadialManifold, delta: f64, h: f64, opts: &GridOptions) -> Result<ComparisonReport> {
    check_nonneg("delta", delta)?;
    ModelSpaceParams::new(m.dim(), h)?;
    let n = m.dim();
    let nm1 = (n - 1) as f64;
    let end = window_end(m, valid_range(h, Window::Thm21), opts);
    run_check(
        end,
        opts,
        |t| {
            let curvature = m.ric_f(t)? - nm1 * h;
            let growth = delta * (t + 1.0) - m.weight().f(t).abs();
            Ok(curvature.min(growth))
        },
        |t| {
            let lhs = m.f_mean_curvature(t)?;
            let rhs = m_h_effective(n, delta, h, t)?;
            Ok((lhs, rhs, rhs - lhs))
        },
    )
}

/// `m_f(t) ≤ m_H(t) + a` under `Ric_f ≥ (n-1)H` and `∂_t f ≥ -a`, on
/// `t ≤ π/(2√H)` when `H > 0`.
pub fn verify_thm22(m: &RadialManifold, a: f64, h: f64, opts: &GridOptions) -> Result<ComparisonReport> {
    check_nonneg("a", a)?;
    let model = ModelSpaceParams::new(m.dim(), h)?;
    let nm1 = (m.dim() - 1) as f64;
    let end = window_end(m, valid_range(h, Window::Thm22), opts);
    run_check(
        end,
        opts,
        |t| Ok((m.ric_f(t)? - nm1 * h).min(m.weight().f_prime(t) + a)),
        |t| {
            let lhs = m.f_mean_curvature(t)?;
            let rhs = model.mean_curvature(t)? + a;
            Ok((lhs, rhs, rhs - lhs))
        },
    )
}

/// Slack of the intermediate inequality obtained after the two integrations by
/// parts,
///
/// ```text
/// sn² m_f ≤ sn² m_H + 2δ(t+1)(sn²)' - δ sn²,
/// ```
///
/// evaluated with closed forms (`sn² m_H = (n-1) sn sn'`, `(sn²)' = 2 sn sn'`).
pub fn verify_ibp_chain(m: &RadialManifold, delta: f64, h: f64, t: f64) -> Result<f64> {
    check_nonneg("delta", delta)?;
    ModelSpaceParams::new(m.dim(), h)?;
    let end = valid_range(h, Window::Thm21).min(m.r_dom());
    if !(t >= R_MIN && t <= end) {
        return Err(Error::domain(
            "integration-by-parts chain",
            t,
            format!("outside [{R_MIN}, {end}]"),
        ));
    }
    let nm1 = (m.dim() - 1) as f64;
    let s = sn(h, t);
    let sp = sn_prime(h, t);
    let lhs = s * s * m.f_mean_curvature(t)?;
    let rhs = nm1 * s * sp + 4.0 * delta * (t + 1.0) * s * sp - delta * s * s;
    Ok(rhs - lhs)
}

fn require_noncompact(m: &RadialManifold) -> Result<()> {
    match m.known_compact() {
        Some(false) => Ok(()),
        other => Err(Error::param(format!(
            "two-sided m_f bounds are derived along rays of non-compact manifolds; \
             {} has known_compact = {other:?}",
            m.name()
        ))),
    }
}

/// Two-sided bound `-4δ ≤ m_f(t) ≤ (n + 4δ(t+1) - 1)/t` along a ray, under
/// `Ric_f ≥ 0` and `|f| ≤ δ(r+1)`.
pub fn verify_mf_bounds(m: &RadialManifold, delta: f64, opts: &GridOptions) -> Result<ComparisonReport> {
    check_nonneg("delta", delta)?;
    require_noncompact(m)?;
    let n = m.dim() as f64;
    let end = window_end(m, f64::INFINITY, opts);
    run_check(
        end,
        opts,
        |t| Ok(m.ric_f(t)?.min(delta * (t + 1.0) - m.weight().f(t).abs())),
        |t| {
            let lhs = m.f_mean_curvature(t)?;
            let rhs = (n + 4.0 * delta * (t + 1.0) - 1.0) / t;
            Ok((lhs, rhs, (rhs - lhs).min(lhs + 4.0 * delta)))
        },
    )
}

/// Two-sided bound `0 ≤ m_f(t) ≤ (n + k - 1)/t` along a ray, under
/// `Ric_f^k ≥ 0`.
pub fn verify_mf_bounds_k(m: &RadialManifold, k: f64, opts: &GridOptions) -> Result<ComparisonReport> {
    if !(k > 0.0) {
        return Err(Error::param(format!("k must be positive, got {k}")));
    }
    require_noncompact(m)?;
    let n = m.dim() as f64;
    let end = window_end(m, f64::INFINITY, opts);
    run_check(
        end,
        opts,
        |t| m.ric_f_k(k, t),
        |t| {
            let lhs = m.f_mean_curvature(t)?;
            let rhs = (n + k - 1.0) / t;
            Ok((lhs, rhs, (rhs - lhs).min(lhs)))
        },
    )
}
