//! `temple-lab`: command-line front end of the laboratory.
//!
//! Exit codes: 0 success, 1 a recorded check failed, 2 bad configuration,
//! 3 numerical abort. Aborts print a JSON error record on stderr and, when
//! the output directory is known, write it to `error.json`. Default output
//! directories live under `$TEMPLE_LAB_OUTPUT` (or `temple-runs`).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use temple_core::estimates::InitialData;
use temple_core::io::write_text;
use temple_core::viscous::SolveConfig;
use temple_core::{LabError, Result};

use commands::Artifacts;
use config::{GridSpec, RunConfig};

#[derive(Parser)]
#[command(
    name = "temple-lab",
    version,
    about = "Viscous Temple-class systems: solves, Riemann fans and estimate studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs the hypothesis suite on a lattice of interior states.
    Check {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Solves the viscous system from a config file or quick flags.
    Solve(SolveArgs),
    /// Builds the exact Riemann fan and samples it on x / t.
    Riemann(RiemannArgs),
    /// Runs the study described by a config file.
    Study {
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Lists the bundled systems.
    ListSystems,
}

#[derive(Args)]
struct SolveArgs {
    /// TOML run config; the quick flags are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<String>,
    /// Left state of Riemann data, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    left: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    right: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x_jump: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    x_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    x_max: f64,
    #[arg(long, default_value_t = 401)]
    cells: usize,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    t_end: f64,
    /// Number of equally spaced records after the initial one.
    #[arg(long, default_value_t = 1)]
    records: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RiemannArgs {
    #[arg(long)]
    system: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    left: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    right: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi_max: Option<f64>,
    #[arg(long, default_value_t = 401)]
    samples: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn exit_code(err: &LabError) -> u8 {
    if err.is_config() {
        2
    } else {
        3
    }
}

fn fail(err: LabError, dir: Option<&PathBuf>) -> ExitCode {
    let code = exit_code(&err);
    let record = commands::error_record(&err, code as i32);
    let text = serde_json::to_string_pretty(&record).expect("record serializes");
    if let Some(dir) = dir {
        let _ = write_text(&dir.join("error.json"), &text);
    }
    eprintln!("{text}");
    ExitCode::from(code)
}

fn pass_code(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn quick_config(a: &SolveArgs) -> Result<RunConfig> {
    let system = a
        .system
        .clone()
        .ok_or_else(|| LabError::Config("solve needs --config or --system".into()))?;
    if a.left.is_empty() || a.right.is_empty() {
        return Err(LabError::Config("quick solves need --left and --right".into()));
    }
    let cfg = RunConfig {
        system,
        grid: GridSpec {
            x_min: a.x_min,
            x_max: a.x_max,
            cells: a.cells,
        },
        data: Some(InitialData::riemann(a.left.clone(), a.right.clone(), a.x_jump)),
        solve: SolveConfig::new(a.epsilon, a.t_end).with_uniform_records(a.records.max(1)),
        study: None,
        output_dir: a.output.clone(),
        seed: 0,
    };
    cfg.validate()?;
    cfg.system()?;
    Ok(cfg)
}

fn output_dir(cfg: &RunConfig, flag: Option<&PathBuf>) -> PathBuf {
    flag.cloned()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| commands::default_output(&cfg.label()))
}

fn run_solve(a: SolveArgs) -> ExitCode {
    let cfg = match &a.config {
        Some(p) => RunConfig::load(p),
        None => quick_config(&a),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => return fail(e, a.output.as_ref()),
    };
    let dir = output_dir(&cfg, a.output.as_ref());
    let mut out = Artifacts::new(dir.clone());
    let result = commands::solve(&cfg, &mut out).and_then(|report| {
        commands::write_report(&report, &mut out)?;
        out.finish("solve", commands::config_value(&cfg), report.pass)?;
        Ok(report)
    });
    match result {
        Ok(report) => {
            println!("{report}wrote {}", dir.display());
            pass_code(report.pass)
        }
        Err(e) => fail(e, Some(&dir)),
    }
}

fn run_riemann(a: RiemannArgs) -> ExitCode {
    let dir = a
        .output
        .clone()
        .unwrap_or_else(|| commands::default_output(&format!("riemann-{}", a.system)));
    let range = match (a.xi_min, a.xi_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => return fail(LabError::Config("give both --xi-min and --xi-max".into()), None),
    };
    let result = temple_core::system::resolve(&a.system).and_then(|sys| {
        let mut out = Artifacts::new(dir.clone());
        let converged = commands::riemann(&sys, &a.left, &a.right, range, a.samples, &mut out)?;
        let config = serde_json::json!({
            "system": a.system,
            "left": a.left,
            "right": a.right,
            "xi_range": range,
            "samples": a.samples,
        });
        out.finish("riemann", config, converged)?;
        Ok(converged)
    });
    match result {
        Ok(converged) => {
            println!(
                "riemann:{} [{}] wrote {}",
                a.system,
                if converged { "PASS" } else { "FAIL" },
                dir.display()
            );
            pass_code(converged)
        }
        Err(e) => fail(e, Some(&dir)),
    }
}

fn run_study(path: PathBuf, output: Option<PathBuf>) -> ExitCode {
    let cfg = match RunConfig::load(&path) {
        Ok(c) => c,
        Err(e) => return fail(e, output.as_ref()),
    };
    let dir = output_dir(&cfg, output.as_ref());
    let result = commands::study(&cfg).and_then(|report| {
        let mut out = Artifacts::new(dir.clone());
        commands::write_report(&report, &mut out)?;
        out.finish("study", commands::config_value(&cfg), report.pass)?;
        Ok(report)
    });
    match result {
        Ok(report) => {
            println!("{report}wrote {}", dir.display());
            pass_code(report.pass)
        }
        Err(e) => fail(e, Some(&dir)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { system, samples } => match temple_core::system::resolve(&system) {
            Ok(sys) => {
                let report = commands::check(&sys, samples);
                print!("{report}");
                pass_code(report.pass)
            }
            Err(e) => fail(e, None),
        },
        Command::Solve(a) => run_solve(a),
        Command::Riemann(a) => run_riemann(a),
        Command::Study { config, output } => run_study(config, output),
        Command::ListSystems => {
            for line in commands::list_systems() {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
    }
}
