//! Time-continuity modulus `|u(t) - u(s)|_1 ~ a |t - s| + b sqrt(eps) |sqrt t - sqrt s|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::report::{EstimateReport, Fit, Relation, Series};
use crate::system::SystemSpec;
use crate::viscous::{solve_viscous, SolveConfig};

use super::fit::nnls2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContinuityOptions {
    pub max_residual: f64,
}

impl Default for ContinuityOptions {
    fn default() -> Self {
        ContinuityOptions { max_residual: 0.25 }
    }
}

/// Fits `a, b >= 0` jointly over all viscosities and time pairs; `a` and
/// `b` are not tied together.
pub fn time_continuity_study(
    sys: &SystemSpec,
    u0: &GridField,
    eps_list: &[f64],
    time_pairs: &[(f64, f64)],
    base: &SolveConfig,
    opts: &ContinuityOptions,
) -> Result<EstimateReport> {
    if eps_list.is_empty() || time_pairs.is_empty() {
        return Err(LabError::Config(
            "continuity study needs viscosities and time pairs".into(),
        ));
    }
    let mut times: Vec<f64> = time_pairs.iter().flat_map(|(s, t)| [*s, *t]).collect();
    if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(LabError::Config("time pairs must be non-negative".into()));
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    let t_end = *times.last().unwrap();
    if !(t_end > 0.0) {
        return Err(LabError::Config("time pairs must reach a positive time".into()));
    }
    let index = |t: f64| times.iter().position(|s| *s == t).unwrap();
    let rows = eps_list
        .par_iter()
        .map(|&eps| {
            let cfg = SolveConfig {
                epsilon: eps,
                t_end,
                ..base.clone()
            }
            .with_records(times.clone());
            let traj = solve_viscous(sys, u0, &cfg)?;
            time_pairs
                .iter()
                .map(|&(s, t)| {
                    let d = traj[index(t)].l1_distance(&traj[index(s)])?;
                    Ok([eps, s, t, d, (t - s).abs(), eps.sqrt() * (t.sqrt() - s.sqrt()).abs()])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let x1: Vec<f64> = rows.iter().map(|r| r[4]).collect();
    let x2: Vec<f64> = rows.iter().map(|r| r[5]).collect();
    let y: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    let (a, b, residual) = nnls2(&x1, &x2, &y);
    let mut series = Series::new(["epsilon", "s", "t", "distance", "model"]);
    for r in &rows {
        series.push(vec![r[0], r[1], r[2], r[3], a * r[4] + b * r[5]]);
    }
    let mut rep = EstimateReport::new(format!("time_continuity:{}", sys.name));
    rep.scalar("a", a).scalar("b", b).scalar("relative_residual", residual);
    rep.series = Some(series);
    rep.fit = Some(Fit {
        model: "a |t - s| + b sqrt(eps) |sqrt t - sqrt s|".into(),
        exponent: 1.0,
        constant: a,
        residual,
    });
    rep.check("relative_residual", residual, Relation::Le, opts.max_residual);
    Ok(rep)
}
