//! Cartesian-product sweeps over list-valued keys.
//!
//! List keys are expanded in sorted key order with the first key varying
//! slowest. Values within a list are sorted (numerically when every item is a
//! number) and deduplicated. Every point is validated before any of them is
//! computed, and points are evaluated in parallel but reported in grid order.

use rayon::prelude::*;

use crate::commands::{run_workflow, EXIT_ALARM, EXIT_OK};
use crate::config::Config;
use crate::error::CliError;
use crate::report::Table;
use crate::scenario::{parse_real, Scenario, WORKFLOWS};

/// Upper bound on the number of grid points.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub exit_code: i32,
    pub points: usize,
    pub table: Table,
    pub alarms: usize,
}

fn sorted_items(items: Vec<String>) -> Vec<String> {
    let numeric: Option<Vec<f64>> = items.iter().map(|s| parse_real(s)).collect();
    let mut paired: Vec<(Option<f64>, String)> = match numeric {
        Some(v) => v.into_iter().map(Some).zip(items).collect(),
        None => items.into_iter().map(|s| (None, s)).collect(),
    };
    paired.sort_by(|a, b| match (a.0, b.0) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => a.1.cmp(&b.1),
    });
    paired.dedup_by(|a, b| match (a.0, b.0) {
        (Some(x), Some(y)) => x == y,
        _ => a.1 == b.1,
    });
    paired.into_iter().map(|(_, s)| s).collect()
}

/// Expands the list keys of `cfg` into one single-valued config per point.
pub fn expand(cfg: &Config) -> Result<Vec<Config>, CliError> {
    let axes: Vec<(String, Vec<String>)> = cfg
        .list_keys()
        .into_iter()
        .map(|k| (k.to_string(), sorted_items(cfg.get(k).expect("listed key").items())))
        .collect();
    let mut total: usize = 1;
    for (key, values) in &axes {
        if values.is_empty() || values.iter().any(String::is_empty) {
            return Err(field_error(
                cfg,
                key,
                "list contains an empty value, so the grid is empty",
            ));
        }
        total = total
            .checked_mul(values.len())
            .filter(|&t| t <= MAX_POINTS)
            .ok_or_else(|| CliError::Usage(format!("sweep grid exceeds {MAX_POINTS} points")))?;
    }
    let mut points = Vec::with_capacity(total);
    for idx in 0..total {
        let mut point = cfg.clone();
        let mut rem = idx;
        for (key, values) in axes.iter().rev() {
            point = point.with_value(key, &values[rem % values.len()]);
            rem /= values.len();
        }
        points.push(point);
    }
    Ok(points)
}

fn field_error(cfg: &Config, key: &str, message: &str) -> CliError {
    CliError::Field {
        key: key.to_string(),
        line: cfg.get(key).and_then(|e| e.line),
        message: message.to_string(),
    }
}

pub fn run_sweep(cfg: &Config) -> Result<SweepOutcome, CliError> {
    let workflow = match cfg.get("workflow") {
        None => {
            return Err(CliError::Usage(format!(
                "sweep needs a `workflow` key ({})",
                WORKFLOWS.join("|")
            )))
        }
        Some(e) if e.is_list() => return Err(field_error(cfg, "workflow", "must be a single workflow")),
        Some(e) => e.value.clone(),
    };
    let points = expand(cfg)?;
    let scenarios = points
        .iter()
        .map(|p| {
            let s = Scenario::from_config(p)?;
            s.validate_for(&workflow)?;
            Ok(s)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let runs = scenarios
        .par_iter()
        .map(|s| run_workflow(&workflow, s))
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut runs = runs.into_iter();
    let first = runs.next().expect("grid is never empty");
    let mut alarms = usize::from(first.exit_code == EXIT_ALARM);
    let mut table = first.summary;
    for run in runs {
        alarms += usize::from(run.exit_code == EXIT_ALARM);
        table.extend(run.summary);
    }
    Ok(SweepOutcome {
        exit_code: if alarms > 0 { EXIT_ALARM } else { EXIT_OK },
        points: scenarios.len(),
        table,
        alarms,
    })
}
