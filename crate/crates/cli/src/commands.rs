//! The four single-scenario workflows. Each returns the text report, a
//! one-row summary table (used by sweeps) and, where useful, a detailed table.

use myers_core::{
    ambrose_diagnosis, epsilon_optimize, evaluate_criterion, tail_integral, verify_ibp_chain, verify_mf_bounds,
    verify_mf_bounds_k, verify_thm21, verify_thm22, ComparisonReport, GridOptions, OptimizedVariant, Variant, Verdict,
};

use crate::error::CliError;
use crate::report::{known, opt_real, real, Summary, Table};
use crate::scenario::{Scenario, COMPARE_CHECKS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CONCLUSION_VIOLATED: i32 = 2;
pub const EXIT_HYPOTHESIS_VIOLATED: i32 = 3;
pub const EXIT_ALARM: i32 = 4;

#[derive(Debug, Clone)]
pub struct Run {
    pub exit_code: i32,
    pub text: String,
    pub summary: Table,
    pub detail: Option<Table>,
}

impl Run {
    /// Table written by `--out` for a single scenario.
    pub fn csv_table(&self) -> &Table {
        self.detail.as_ref().unwrap_or(&self.summary)
    }
}

pub fn run_workflow(workflow: &str, s: &Scenario) -> Result<Run, CliError> {
    match workflow {
        "compare" => compare(s),
        "constants" => constants(s),
        "criterion" => criterion(s),
        "ambrose" => ambrose(s),
        other => Err(CliError::Usage(format!("unknown workflow `{other}`"))),
    }
}

const COMPARE_PARAMS: &[&str] = &[
    "manifold",
    "n",
    "weight",
    "check",
    "delta",
    "a",
    "k",
    "H",
    "t",
    "step",
    "r_max_test",
];

fn compare_params(s: &Scenario, check: &str, profile: &str, weight: &str) -> Vec<String> {
    vec![
        profile.to_string(),
        s.n.to_string(),
        weight.to_string(),
        check.to_string(),
        real(s.delta),
        real(s.a),
        real(s.k),
        real(s.h),
        opt_real(s.t),
        real(s.step),
        real(s.r_max_test),
    ]
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_OK,
        Verdict::ConclusionViolated => EXIT_CONCLUSION_VIOLATED,
        Verdict::HypothesisViolated => EXIT_HYPOTHESIS_VIOLATED,
        Verdict::EmptyWindow => EXIT_ERROR,
    }
}

pub fn compare(s: &Scenario) -> Result<Run, CliError> {
    s.validate_for("compare")?;
    let check = s.variant_name("compare", COMPARE_CHECKS)?.to_string();
    let m = s.build_manifold()?;
    let profile = m.profile().name();
    let weight = m.weight().name();
    let params = compare_params(s, &check, &profile, &weight);

    let mut header: Vec<&str> = COMPARE_PARAMS.to_vec();
    header.extend(["window_end", "hypothesis_slack", "conclusion_slack", "verdict"]);
    let mut summary = Table::new(&header);
    let mut text = Summary::default();
    text.line("check", check.as_str())
        .line("manifold", format!("{} (n = {})", m.name(), m.dim()));

    if check == "ibp-chain" {
        let t = s.t.expect("validated");
        let hyp = verify_thm21(&m, s.delta, s.h, &GridOptions::new(s.step, t)?)?;
        let slack = verify_ibp_chain(&m, s.delta, s.h, t)?;
        let verdict = if hyp.verdict == Verdict::HypothesisViolated {
            Verdict::HypothesisViolated
        } else if slack < -myers_core::comparison::TOLERANCE {
            Verdict::ConclusionViolated
        } else {
            Verdict::Holds
        };
        text.line("t", real(t))
            .line(
                "hypothesis",
                format!("min margin on [r_min, t] {:.6e}", hyp.hypothesis_slack),
            )
            .line("slack", format!("{slack:.6e}"))
            .line("verdict", verdict.as_str());
        let mut row = params;
        row.extend([real(t), real(hyp.hypothesis_slack), real(slack), verdict.to_string()]);
        summary.push(row);
        return Ok(Run {
            exit_code: verdict_exit(verdict),
            text: text.render(),
            summary,
            detail: None,
        });
    }

    let opts = s.grid()?;
    let report: ComparisonReport = match check.as_str() {
        "thm21" => verify_thm21(&m, s.delta, s.h, &opts)?,
        "thm22" => verify_thm22(&m, s.a, s.h, &opts)?,
        "mf-bounds" => verify_mf_bounds(&m, s.delta, &opts)?,
        "mf-bounds-k" => verify_mf_bounds_k(&m, s.k, &opts)?,
        other => unreachable!("validated compare check {other}"),
    };
    text.line(
        "window",
        format!(
            "[{:.6e}, {:.6e}] ({} points)",
            report.window.0,
            report.window.1,
            report.grid.len()
        ),
    )
    .line("hypothesis", format!("min margin {:.6e}", report.hypothesis_slack))
    .line("conclusion", format!("min slack {:.6e}", report.conclusion_slack))
    .line("verdict", report.verdict.as_str());
    if report.verdict == Verdict::HypothesisViolated {
        text.line("note", "hypothesis fails on the grid; the conclusion is not judged");
    }
    if report.verdict == Verdict::EmptyWindow {
        text.line("note", "the hypothesis window contains no admissible radius");
    }

    let mut row = params.clone();
    row.extend([
        real(report.window.1),
        real(report.hypothesis_slack),
        real(report.conclusion_slack),
        report.verdict.to_string(),
    ]);
    summary.push(row);

    let mut detail_header: Vec<&str> = COMPARE_PARAMS.to_vec();
    detail_header.extend(["r", "lhs", "rhs", "slack", "hypothesis_margin"]);
    let mut detail = Table::new(&detail_header);
    for p in &report.grid {
        let mut row = params.clone();
        row.extend([real(p.t), real(p.lhs), real(p.rhs), real(p.slack), real(p.hypothesis)]);
        detail.push(row);
    }
    Ok(Run {
        exit_code: verdict_exit(report.verdict),
        text: text.render(),
        summary,
        detail: Some(detail),
    })
}

const CONSTANT_COLUMNS: &[&str] = &[
    "variant",
    "n",
    "delta",
    "a",
    "k",
    "b",
    "r0",
    "nu",
    "delta1",
    "eps",
    "eps1",
    "c3_convention",
    "growth",
    "constant",
    "branch",
    "eps_star",
    "optimized_value",
    "cross_check_delta",
    "notes",
];

fn power_law_branch(b: f64, with_b2: bool) -> &'static str {
    if b > 2.0 {
        "b>2"
    } else if b > 1.0 && with_b2 {
        "1<b<=2"
    } else if b == 2.0 {
        "b=2"
    } else {
        "b<=1"
    }
}

pub fn constants(s: &Scenario) -> Result<Run, CliError> {
    s.validate_for("constants")?;
    let variant = s.criterion_variant("constants")?;
    let params = s.criterion_params(variant)?;
    let needs_h = matches!(variant, Variant::C1 | Variant::C3 | Variant::C5 | Variant::Qiu);
    let growth = if needs_h { Some(s.build_growth()?) } else { None };
    let value = params.constant(growth.as_ref())?;
    let mut notes = Vec::new();

    let branch = match variant {
        Variant::C1 | Variant::C3 | Variant::C5 | Variant::Qiu => {
            let tail = tail_integral(growth.as_ref().expect("built above"), s.eps)?;
            if tail.is_infinite() {
                notes.push(
                    "tail integral of h diverges; any positive eps1 is admissible and the constant is eps1".to_string(),
                );
                "divergent tail"
            } else {
                "finite tail"
            }
        }
        Variant::C2 | Variant::C4 | Variant::C6 => power_law_branch(s.b, true),
        Variant::Wan => power_law_branch(s.b, false),
        Variant::Cgt => "diameter bound",
    };
    if variant == Variant::C3 {
        notes.push(format!("C3 convention: {}", s.c3_convention.as_str()));
    }

    let mut eps_star = None;
    let mut optimized = None;
    let mut cross_delta = None;
    if matches!(variant, Variant::C4 | Variant::C6) && s.b > 2.0 {
        let which = if variant == Variant::C4 {
            OptimizedVariant::C4
        } else {
            OptimizedVariant::C6
        };
        let (e, v) = epsilon_optimize(which, s.n, s.k, s.b, s.r0, s.a)?;
        eps_star = Some(e);
        optimized = Some(v);
        cross_delta = Some(((v - value) / value).abs());
        if v < value * (1.0 - 1e-9) {
            notes.push(format!("eps = {e:.6e} gives the smaller value {v:.6e}"));
        }
    }

    let mut text = Summary::default();
    text.line("variant", variant.as_str())
        .line(
            if variant == Variant::Cgt {
                "diameter"
            } else {
                "constant"
            },
            format!("{value:.10}"),
        )
        .line("branch", branch);
    if let (Some(e), Some(v), Some(d)) = (eps_star, optimized, cross_delta) {
        text.line("eps*", format!("{e:.10}"))
            .line("optimized", format!("{v:.10}"))
            .line("cross-check", format!("relative delta {d:.3e}"));
    }
    for n in &notes {
        text.line("note", n.as_str());
    }

    let mut summary = Table::new(CONSTANT_COLUMNS);
    summary.push(vec![
        variant.to_string(),
        s.n.to_string(),
        real(s.delta),
        real(s.a),
        real(s.k),
        real(s.b),
        real(s.r0),
        real(s.nu),
        real(s.delta1),
        real(s.eps),
        real(s.eps1),
        s.c3_convention.as_str().to_string(),
        growth
            .as_ref()
            .map(|g| g.name())
            .unwrap_or_else(|| format!("power-law(b={},r0={})", s.b, s.r0)),
        real(value),
        branch.to_string(),
        opt_real(eps_star),
        opt_real(optimized),
        opt_real(cross_delta),
        notes.join("; "),
    ]);
    Ok(Run {
        exit_code: EXIT_OK,
        text: text.render(),
        summary,
        detail: None,
    })
}

/// Column set of the criterion workflow.
pub const CRITERION_COLUMNS: &[&str] = &[
    "variant",
    "n",
    "delta",
    "a",
    "k",
    "b",
    "r0",
    "eps",
    "eps1",
    "C",
    "min_margin",
    "criterion_met",
    "known_compact",
    "conjugate_time",
    "notes",
];

pub fn criterion(s: &Scenario) -> Result<Run, CliError> {
    s.validate_for("criterion")?;
    let variant = s.criterion_variant("criterion")?;
    let params = s.criterion_params(variant)?;
    let m = s.build_manifold()?;
    let growth = if variant.uses_power_law() {
        None
    } else {
        Some(s.build_growth()?)
    };
    let v = evaluate_criterion(&m, &params, growth.as_ref(), s.r_max_test)?;

    let mut text = Summary::default();
    text.line("variant", variant.as_str())
        .line(
            "manifold",
            format!(
                "{} (n = {}, known compact: {})",
                m.name(),
                m.dim(),
                known(m.known_compact())
            ),
        )
        .line("constant", format!("{:.10}", v.constant_used))
        .line("window", format!("[{:.6e}, {:.6e}]", v.window.0, v.window.1))
        .line("min margin", format!("{:.6e}", v.min_margin))
        .line(
            "weight hypothesis",
            if v.weight_hypothesis_met { "met" } else { "fails" },
        )
        .line("criterion met", v.criterion_met.to_string())
        .line("predicted compact", v.predicted_compact.to_string())
        .line(
            "conjugate time",
            v.cross_check
                .map(|t| format!("{t:.6e}"))
                .unwrap_or_else(|| "none in window".into()),
        );
    if v.inconsistent {
        text.line("ALARM", "criterion met on a manifold known to be non-compact");
    }
    for n in &v.notes {
        text.line("note", n.as_str());
    }

    let mut summary = Table::new(CRITERION_COLUMNS);
    summary.push(vec![
        variant.to_string(),
        s.n.to_string(),
        real(s.delta),
        real(s.a),
        real(s.k),
        real(s.b),
        real(s.r0),
        real(s.eps),
        real(s.eps1),
        real(v.constant_used),
        real(v.min_margin),
        v.criterion_met.to_string(),
        known(m.known_compact()),
        opt_real(v.cross_check),
        v.notes.join("; "),
    ]);
    Ok(Run {
        exit_code: if v.inconsistent { EXIT_ALARM } else { EXIT_OK },
        text: text.render(),
        summary,
        detail: None,
    })
}

const AMBROSE_COLUMNS: &[&str] = &[
    "manifold",
    "n",
    "weight",
    "C",
    "alpha",
    "t_probe",
    "fprime_slack",
    "fprime_condition_met",
    "integral_T",
    "integral_2T",
    "integral_4T",
    "increment_1",
    "increment_2",
    "trend",
    "conjugate_time",
    "r_dom",
    "hypotheses_hold",
    "predicted_compact",
    "known_compact",
    "alarm",
    "notes",
];

pub fn ambrose(s: &Scenario) -> Result<Run, CliError> {
    s.validate_for("ambrose")?;
    let m = s.build_manifold()?;
    let r = ambrose_diagnosis(&m, s.c, s.alpha, s.t_probe)?;

    let mut text = Summary::default();
    text.line(
        "manifold",
        format!(
            "{} (n = {}, known compact: {})",
            m.name(),
            m.dim(),
            known(m.known_compact())
        ),
    )
    .line(
        "f' condition",
        format!(
            "min slack {:.6e} ({})",
            r.fprime_slack,
            if r.fprime_condition_met { "met" } else { "fails" }
        ),
    );
    for (t, v) in &r.probes {
        text.line("integral", format!("[0, {t:.4}] -> {v:.6e}"));
    }
    text.line("trend", r.trend.as_str())
        .line(
            "conjugate time",
            r.conjugate_time
                .map(|t| format!("{t:.6e}"))
                .unwrap_or_else(|| "none found".into()),
        )
        .line("hypotheses hold", r.hypotheses_hold.to_string())
        .line("predicted compact", r.predicted_compact.to_string());
    if r.alarm {
        text.line("ALARM", "hypotheses hold on a manifold known to be non-compact");
    }
    for n in &r.notes {
        text.line("note", n.as_str());
    }

    let mut summary = Table::new(AMBROSE_COLUMNS);
    summary.push(vec![
        m.profile().name(),
        s.n.to_string(),
        m.weight().name(),
        real(s.c),
        real(s.alpha),
        real(s.t_probe),
        real(r.fprime_slack),
        r.fprime_condition_met.to_string(),
        real(r.probes[0].1),
        real(r.probes[1].1),
        real(r.probes[2].1),
        real(r.increments.0),
        real(r.increments.1),
        r.trend.as_str().to_string(),
        opt_real(r.conjugate_time),
        real(r.r_dom),
        r.hypotheses_hold.to_string(),
        r.predicted_compact.to_string(),
        known(m.known_compact()),
        r.alarm.to_string(),
        r.notes.join("; "),
    ]);
    Ok(Run {
        exit_code: if r.alarm { EXIT_ALARM } else { EXIT_OK },
        text: text.render(),
        summary,
        detail: None,
    })
}
