//! Batch front-end: scenario files in, JSON reports and exit codes out.

mod report;
mod run;
mod scenario;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use report::{
    CheckReport, CheckStatus, Magnitude, Report, ReportSummary, Residual, EXIT_CONFIG, EXIT_ENGINE,
    EXIT_FAIL, EXIT_INDETERMINATE, EXIT_OK,
};
pub use run::{parse_scenario, run_scenario, ConfigError, Overrides};
pub use scenario::{
    build, validate, AmbientSpec, Built, Expect, Factor, ImmersionSpec, Sampling, Scenario,
    Thresholds, CHECK_NAMES,
};

#[derive(Parser, Debug)]
#[command(name = "norden", version, about = "Checks for almost hypercomplex manifolds with Hermitian and Norden metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the checks listed in a scenario file.
    Run(RunArgs),
    /// List the known check names.
    Checks,
}

#[derive(Args, Debug)]
struct RunArgs {
    file: PathBuf,
    /// Number of Halton sample points.
    #[arg(long)]
    points: Option<usize>,
    /// Half-width of the sampling box.
    #[arg(long = "box")]
    half_width: Option<f64>,
    #[arg(long)]
    tol_hold: Option<f64>,
    #[arg(long)]
    tol_fail: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON output (the only format; accepted for compatibility).
    #[arg(long, default_value_t = true)]
    json: bool,
}

/// Runs the command line and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Checks => {
            for c in CHECK_NAMES {
                println!("{c}");
            }
            EXIT_OK
        }
        Command::Run(a) => run_file(&a),
    }
}

fn run_file(a: &RunArgs) -> i32 {
    let text = match std::fs::read_to_string(&a.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", a.file.display());
            return EXIT_CONFIG;
        }
    };
    let overrides = Overrides {
        points: a.points,
        half_width: a.half_width,
        hold: a.tol_hold,
        fail: a.tol_fail,
    };
    let report = match parse_scenario(&text).and_then(|s| run_scenario(s, &overrides)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", a.file.display());
            return EXIT_CONFIG;
        }
    };
    let json = report.to_json();
    match &a.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_ENGINE;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{json}").and_then(|_| out.flush()) {
                eprintln!("error: cannot write report: {e}");
                return EXIT_ENGINE;
            }
        }
    }
    for c in &report.checks {
        if let Some(err) = &c.error {
            eprintln!("check {} failed to evaluate: {err}", c.name);
        }
    }
    report.summary.exit_code
}
