//! Comparison ODEs in linear (Jacobi) form.
//!
//! The Riccati equation `m' = -m²/n_eff - ric(t)` is integrated through the
//! substitution `m = n_eff u'/u`, which turns it into
//!
//! ```text
//! u'' + (ric(t) / n_eff) u = 0.
//! ```
//!
//! The pole singularity `m ~ n_eff/t` disappears (`u(0) = 0, u'(0) = 1`) and a
//! finite-time blow-up `m → -∞` becomes a zero crossing of `u`, located by
//! bisection on the last step. `n_eff` is real so the same engine serves the
//! `n - 1` and `n + k - 1` versions of the inequality.

use crate::model_space::ModelSpaceParams;
use crate::numerics::MonotoneCubic;
use crate::{Error, Result};

pub const DEFAULT_STEP: f64 = 1e-3;

/// Width of the bracket at which zero crossings of `u` are accepted.
const EVENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub u: f64,
    pub u_prime: f64,
    /// `n_eff · u'/u`; `+∞` at the pole sample of a Jacobi trajectory.
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiTrajectory {
    n_eff: f64,
    samples: Vec<TrajectorySample>,
    conjugate_time: Option<f64>,
    blowup_time: Option<f64>,
}

impl RiccatiTrajectory {
    pub fn n_eff(&self) -> f64 {
        self.n_eff
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    /// First zero of `u` after the pole (Jacobi trajectories only).
    pub fn conjugate_time(&self) -> Option<f64> {
        self.conjugate_time
    }

    /// Time at which `m → -∞` (trajectories started from interior data).
    pub fn blowup_time(&self) -> Option<f64> {
        self.blowup_time
    }

    pub fn start(&self) -> f64 {
        self.samples[0].t
    }

    /// Last sampled time. When an event occurred this is the last step
    /// before it.
    pub fn end(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    /// Monotone cubic interpolant of `m` over the finite samples.
    pub fn m_interpolant(&self) -> Result<MonotoneCubic> {
        let (t, m): (Vec<f64>, Vec<f64>) = self
            .samples
            .iter()
            .filter(|s| s.m.is_finite())
            .map(|s| (s.t, s.m))
            .unzip();
        MonotoneCubic::new(t, m)
    }
}

struct Rhs<'a, F> {
    ric: &'a F,
    n_eff: f64,
}

impl<F: Fn(f64) -> f64> Rhs<'_, F> {
    fn coefficient(&self, t: f64) -> Result<f64> {
        let value = (self.ric)(t);
        if value.is_finite() {
            Ok(value / self.n_eff)
        } else {
            Err(Error::NonFinite { t, value })
        }
    }

    /// One classical RK4 step of size `h` for `(u, u')`.
    fn step(&self, t: f64, (u, v): (f64, f64), h: f64) -> Result<(f64, f64)> {
        let c0 = self.coefficient(t)?;
        let c_mid = self.coefficient(t + 0.5 * h)?;
        let c1 = self.coefficient(t + h)?;

        let (k1u, k1v) = (v, -c0 * u);
        let (u2, v2) = (u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        let (k2u, k2v) = (v2, -c_mid * u2);
        let (u3, v3) = (u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        let (k3u, k3v) = (v3, -c_mid * u3);
        let (u4, v4) = (u + h * k3u, v + h * k3v);
        let (k4u, k4v) = (v4, -c1 * u4);

        Ok((
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        ))
    }
}

fn sample(n_eff: f64, t: f64, (u, v): (f64, f64)) -> TrajectorySample {
    let m = if u == 0.0 { f64::INFINITY } else { n_eff * v / u };
    TrajectorySample { t, u, u_prime: v, m }
}

/// Fixed-step RK4 from `(t0, u0, v0)` until `t_max` or the first crossing of
/// `u` from positive to non-positive. Returns samples and the crossing time.
fn run<F: Fn(f64) -> f64>(
    ric: &F,
    n_eff: f64,
    t0: f64,
    init: (f64, f64),
    t_max: f64,
    step: f64,
) -> Result<(Vec<TrajectorySample>, Option<f64>)> {
    let rhs = Rhs { ric, n_eff };
    let mut samples = vec![sample(n_eff, t0, init)];
    let mut state = init;
    let mut t = t0;
    let mut i = 0u64;

    while t < t_max {
        i += 1;
        let t_next = (t0 + i as f64 * step).min(t_max);
        let h = t_next - t;
        let next = rhs.step(t, state, h)?;

        if state.0 > 0.0 && next.0 <= 0.0 {
            let (mut lo, mut hi) = (0.0, h);
            while hi - lo > EVENT_TOL {
                let mid = 0.5 * (lo + hi);
                if rhs.step(t, state, mid)?.0 > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok((samples, Some(t + 0.5 * (lo + hi))));
        }

        state = next;
        t = t_next;
        samples.push(sample(n_eff, t, state));
    }
    Ok((samples, None))
}

fn check_common(n_eff: f64, step: f64, span: f64) -> Result<()> {
    if !(n_eff > 0.0 && n_eff.is_finite()) {
        return Err(Error::param(format!("n_eff must be positive, got {n_eff}")));
    }
    if !(step > 0.0) {
        return Err(Error::param(format!("step must be positive, got {step}")));
    }
    if !span.is_finite() {
        return Err(Error::param("integration interval must be finite"));
    }
    if step >= span {
        return Err(Error::param(format!(
            "step {step} must be smaller than the integration interval {span}"
        )));
    }
    Ok(())
}

/// Integrates `u'' + (ric(t)/n_eff) u = 0`, `u(0) = 0`, `u'(0) = 1` on
/// `[0, t_max]`. The first zero of `u` is reported as the conjugate time and
/// ends the trajectory.
pub fn integrate_jacobi<F: Fn(f64) -> f64>(ric: F, n_eff: f64, t_max: f64, step: f64) -> Result<RiccatiTrajectory> {
    check_common(n_eff, step, t_max)?;
    let (samples, event) = run(&ric, n_eff, 0.0, (0.0, 1.0), t_max, step)?;
    Ok(RiccatiTrajectory {
        n_eff,
        samples,
        conjugate_time: event,
        blowup_time: None,
    })
}

/// Integrates the Riccati equation from interior data `m(t0) = m0` via
/// `u(t0) = 1`, `u'(t0) = m0/n_eff`. A zero of `u` is a blow-up of `m` to `-∞`.
pub fn integrate_riccati_from<F: Fn(f64) -> f64>(
    m0: f64,
    t0: f64,
    ric: F,
    n_eff: f64,
    t_max: f64,
    step: f64,
) -> Result<RiccatiTrajectory> {
    if !m0.is_finite() {
        return Err(Error::param(format!("initial m must be finite, got {m0}")));
    }
    if !(t0 > 0.0) {
        return Err(Error::param(format!("t0 must be positive, got {t0}")));
    }
    if !(t0 < t_max) {
        return Err(Error::param(format!("t0 = {t0} must precede t_max = {t_max}")));
    }
    check_common(n_eff, step, t_max - t0)?;
    let (samples, event) = run(&ric, n_eff, t0, (1.0, m0 / n_eff), t_max, step)?;
    Ok(RiccatiTrajectory {
        n_eff,
        samples,
        conjugate_time: None,
        blowup_time: event,
    })
}

/// Closed-form `m_H(t)` for a constant input `ric ≡ (n-1)H`.
pub fn constant_ric_oracle(h: f64, n: usize, t: f64) -> Result<f64> {
    ModelSpaceParams::new(n, h)?.mean_curvature(t)
}
