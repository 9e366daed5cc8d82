use std::path::PathBuf;

use serde_json::{json, Value};
use temple_core::estimates::{
    bv_study, decay_study, homotopy_identity_check, kernel_for_run, propagation_study, residual_study, stability_study,
    time_continuity_study, transversal_decay_check, vanishing_viscosity_study, InteractionKernel,
};
use temple_core::frame::{interior_samples, verify_system};
use temple_core::io::{fmt_float, to_sorted_json, write_text};
use temple_core::riemann::solve_riemann;
use temple_core::system::{self, SystemSpec};
use temple_core::viscous::{diagnostics, solve_viscous, SolveConfig};
use temple_core::{io::field_csv, EstimateReport, LabError, Result};

use crate::config::{RunConfig, StudySpec};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
/// Environment variable naming the root of default output directories.
pub const OUTPUT_ROOT_VAR: &str = "TEMPLE_LAB_OUTPUT";
const DEFAULT_ROOT: &str = "temple-runs";
/// Margin keeping finite-difference stencils inside the box.
const SAMPLE_MARGIN: f64 = 0.01;

pub fn default_output(label: &str) -> PathBuf {
    let root = std::env::var_os(OUTPUT_ROOT_VAR).map_or_else(|| PathBuf::from(DEFAULT_ROOT), PathBuf::from);
    root.join(label)
}

/// Files of one run; the manifest lists them in write order.
pub struct Artifacts {
    pub dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: PathBuf) -> Self {
        Artifacts {
            dir,
            written: Vec::new(),
        }
    }

    pub fn write(&mut self, name: &str, text: &str) -> Result<()> {
        write_text(&self.dir.join(name), text)?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn finish(mut self, command: &str, config: Value, pass: bool) -> Result<()> {
        self.written.push("manifest.json".into());
        let manifest = json!({
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "tool": "temple-lab",
            "tool_version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": config,
            "artifacts": self.written,
            "pass": pass,
        });
        write_text(&self.dir.join("manifest.json"), &to_sorted_json(&manifest))
    }
}

/// Machine-readable record of an aborted run.
pub fn error_record(err: &LabError, exit_code: i32) -> Value {
    let mut v = json!({
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "kind": err.kind(),
        "message": err.to_string(),
        "exit_code": exit_code,
    });
    if let LabError::Parse { line, column, .. } = err {
        v["line"] = json!(line);
        v["column"] = json!(column);
    }
    v
}

pub fn list_systems() -> Vec<String> {
    system::bundled_systems()
        .iter()
        .map(|s| {
            let kind = if s.negative_control {
                "negative control"
            } else if s.constant_frame.is_some() {
                "constant frame"
            } else {
                "variable frame"
            };
            format!("{:<16} n = {}  {kind}", s.name, s.n)
        })
        .collect()
}

pub fn check(sys: &SystemSpec, samples: usize) -> EstimateReport {
    verify_system(sys, &interior_samples(&sys.domain, samples, SAMPLE_MARGIN))
}

/// Solves the configured run and writes one field CSV per record plus a
/// diagnostics report.
pub fn solve(cfg: &RunConfig, out: &mut Artifacts) -> Result<EstimateReport> {
    let sys = cfg.system()?;
    let u0 = cfg.sample(&sys, cfg.data()?)?;
    let traj = solve_viscous(&sys, &u0, &cfg.solve)?;
    let mut report = EstimateReport::new(format!("solve:{}", sys.name));
    let mut series = temple_core::report::Series::new(["t", "tv", "ux_l1", "uxx_l1", "ux_linf", "deviation_linf"]);
    for (k, f) in traj.iter().enumerate() {
        out.write(&format!("field_{k:04}.csv"), &field_csv(f))?;
        let d = diagnostics(f);
        series.push(
            ["t", "tv", "ux_l1", "uxx_l1", "ux_linf", "deviation_linf"]
                .iter()
                .map(|c| d.get(c).unwrap_or(f64::NAN))
                .collect(),
        );
    }
    report.scalar("records", traj.len() as f64).scalar("dx", u0.dx);
    report.series = Some(series);
    Ok(report)
}

/// Fan description and its profile on `samples` points of `xi`.
pub fn riemann(
    sys: &SystemSpec,
    left: &[f64],
    right: &[f64],
    xi_range: Option<(f64, f64)>,
    samples: usize,
    out: &mut Artifacts,
) -> Result<bool> {
    let fan = solve_riemann(sys, left, right)?;
    let (a, b) = xi_range.unwrap_or_else(|| {
        let (lo, hi) = fan.active_range().unwrap_or((-1.0, 1.0));
        let pad = 0.25 * (hi - lo).max(1.0);
        (lo - pad, hi + pad)
    });
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) || samples < 2 {
        return Err(LabError::Config(
            "xi range must be increasing with at least two samples".into(),
        ));
    }
    let mut csv = String::from("xi");
    for i in 1..=sys.n {
        csv.push_str(&format!(",u_{i}"));
    }
    csv.push('\n');
    for k in 0..samples {
        let xi = a + (b - a) * k as f64 / (samples - 1) as f64;
        csv.push_str(&fmt_float(xi));
        for v in fan.sample_xi(xi) {
            csv.push(',');
            csv.push_str(&fmt_float(v));
        }
        csv.push('\n');
    }
    let desc = fan.to_json();
    out.write("fan.json", &to_sorted_json(&desc))?;
    out.write("fan.csv", &csv)?;
    Ok(fan.hull_converged.iter().all(|c| *c))
}

fn run_trajectory(sys: &SystemSpec, cfg: &RunConfig, records: usize) -> Result<Vec<temple_core::GridField>> {
    let u0 = cfg.sample(sys, cfg.data()?)?;
    solve_viscous(sys, &u0, &cfg.solve.clone().with_uniform_records(records))
}

/// Dispatches the configured study.
pub fn study(cfg: &RunConfig) -> Result<EstimateReport> {
    let spec = cfg
        .study
        .as_ref()
        .ok_or_else(|| LabError::Config("the config has no [study] table".into()))?;
    let sys = cfg.system()?;
    let base: &SolveConfig = &cfg.solve;
    let eps = base.epsilon;
    match spec {
        StudySpec::Hypotheses { samples } => Ok(check(&sys, *samples)),
        StudySpec::Bv { epsilons, options } => {
            let u0 = cfg.sample(&sys, cfg.data()?)?;
            bv_study(&sys, &u0, epsilons, base, options)
        }
        StudySpec::Stability {
            other,
            theta_count,
            options,
        } => {
            let u0 = cfg.sample(&sys, cfg.data()?)?;
            let v0 = cfg.sample(&sys, other)?;
            stability_study(&sys, &u0, &v0, eps, *theta_count, base, options)
        }
        StudySpec::HomotopyIdentity {
            other,
            theta,
            delta,
            factor,
        } => {
            let u0 = cfg.sample(&sys, cfg.data()?)?;
            let v0 = cfg.sample(&sys, other)?;
            homotopy_identity_check(&sys, &u0, &v0, *theta, *delta, base, *factor)
        }
        StudySpec::Continuity {
            epsilons,
            time_pairs,
            options,
        } => {
            let u0 = cfg.sample(&sys, cfg.data()?)?;
            time_continuity_study(&sys, &u0, epsilons, time_pairs, base, options)
        }
        StudySpec::Propagation {
            other,
            support,
            options,
        } => {
            let u0 = cfg.sample(&sys, cfg.data()?)?;
            let v0 = cfg.sample(&sys, other)?;
            propagation_study(&sys, &u0, &v0, *support, eps, base, options)
        }
        StudySpec::Transversal {
            families,
            records,
            c,
            c1,
            options,
        } => {
            let (i, j) = families;
            if *i == 0 || *j == 0 {
                return Err(LabError::Config("families are one-based".into()));
            }
            let traj = run_trajectory(&sys, cfg, *records)?;
            let measured = kernel_for_run(&sys, &traj, eps, i - 1, j - 1);
            let kernel = match (c, c1) {
                (Some(c), Some(c1)) => InteractionKernel::new(*c, *c1)?,
                (c, c1) => {
                    let m = measured?;
                    InteractionKernel::new(c.unwrap_or(m.c), c1.unwrap_or(m.c1))?
                }
            };
            transversal_decay_check(&sys, &traj, eps, (i - 1, j - 1), &kernel, options)
        }
        StudySpec::VanishingViscosity {
            epsilons,
            t_star,
            options,
        } => {
            let data = cfg.data()?;
            let u0 = cfg.sample(&sys, data)?;
            vanishing_viscosity_study(&sys, data, &u0, epsilons, *t_star, base, options)
        }
        StudySpec::Residual { cells, t1, min_order } => residual_study(
            &sys,
            cfg.data()?,
            (cfg.grid.x_min, cfg.grid.x_max),
            cells,
            eps,
            *t1,
            base,
            *min_order,
        ),
        StudySpec::Decay { tangent, options } => {
            let u0 = cfg.sample(&sys, cfg.data()?)?;
            let h0 = cfg.sample_tangent(&sys, tangent)?;
            decay_study(&sys, &u0, &h0, base, options)
        }
    }
}

/// Writes `report.json` and, when present, `series.csv`.
pub fn write_report(report: &EstimateReport, out: &mut Artifacts) -> Result<()> {
    out.write("report.json", &report.to_json())?;
    if let Some(s) = &report.series {
        out.write("series.csv", &s.to_csv())?;
    }
    Ok(())
}

pub fn config_value(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}
