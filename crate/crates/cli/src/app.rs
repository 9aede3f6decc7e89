use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{run_workflow, EXIT_ERROR, EXIT_OK};
use crate::config::Config;
use crate::error::CliError;
use crate::report::real;
use crate::scenario::Scenario;
use crate::sweep::run_sweep;

/// Numerical checks of Myers-type compactness criteria on rotationally
/// symmetric weighted manifolds.
#[derive(Debug, Parser)]
#[command(name = "myers", version)]
pub struct Cli {
    /// Scenario file with one `key = value` per line.
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,

    /// Write the result table as CSV to this path.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    /// Grid spacing; replaces the `step` key.
    #[arg(long, global = true)]
    pub step: Option<f64>,

    /// Suppress the text report.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    /// Set a scenario key, overriding the config file. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Grid check of an f-mean curvature comparison bound.
    Compare,
    /// Evaluate a compactness constant.
    Constants,
    /// Test a compactness criterion on a manifold.
    Criterion,
    /// Divergence-type diagnosis and conjugate-point search.
    Ambrose,
    /// Run a workflow over every combination of list-valued keys.
    Sweep,
}

impl Command {
    fn workflow(self) -> Option<&'static str> {
        match self {
            Command::Compare => Some("compare"),
            Command::Constants => Some("constants"),
            Command::Criterion => Some("criterion"),
            Command::Ambrose => Some("ambrose"),
            Command::Sweep => None,
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    for assignment in &cli.set {
        cfg.apply_override(assignment)?;
    }
    if let Some(step) = cli.step {
        cfg.set("step", &real(step))?;
    }
    Ok(cfg)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = load_config(cli)?;
    let (code, text, table) = match cli.command.workflow() {
        Some(workflow) => {
            let scenario = Scenario::from_config(&cfg)?;
            let run = run_workflow(workflow, &scenario)?;
            let table = run.csv_table().clone();
            (run.exit_code, run.text, table)
        }
        None => {
            let sweep = run_sweep(&cfg)?;
            let text = format!("sweep: {} points, {} alarms\n", sweep.points, sweep.alarms);
            (sweep.exit_code, text, sweep.table)
        }
    };
    if !cli.quiet {
        let _ = out.write_all(text.as_bytes());
    }
    if let Some(path) = &cli.out {
        table.write_csv(path)?;
    }
    Ok(code)
}

/// Parses `args` (program name first) and runs the requested command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_ERROR
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
