//! L1 stability: direct comparison of two runs and the homotopy bound
//! `|u(t) - v(t)|_1 <= int_0^1 |h^theta(t)|_1 d theta`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::report::{EstimateReport, Relation, Series};
use crate::system::SystemSpec;
use crate::viscous::{solve_linearized, solve_tangent, solve_viscous, SolveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilityOptions {
    pub records: usize,
    /// Bound on `|u(t) - v(t)|_1 / |u0 - v0|_1`; see [`default_l1_bound`].
    pub bound: Option<f64>,
    /// The homotopy bound may be exceeded by `slack_factor * dx * |h0|_1`.
    pub slack_factor: f64,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        StabilityOptions {
            records: 10,
            bound: None,
            slack_factor: 5.0,
        }
    }
}

/// `1 + 1e-6` for scalar laws (L1 contraction), `cond(R) + 1e-6` for
/// constant-frame systems and 3 otherwise.
pub fn default_l1_bound(sys: &SystemSpec) -> f64 {
    if sys.n == 1 {
        1.0 + 1e-6
    } else if let Some(cf) = &sys.constant_frame {
        cf.condition_number() + 1e-6
    } else {
        3.0
    }
}

pub fn stability_study(
    sys: &SystemSpec,
    u0: &GridField,
    v0: &GridField,
    epsilon: f64,
    theta_count: usize,
    base: &SolveConfig,
    opts: &StabilityOptions,
) -> Result<EstimateReport> {
    u0.require_same_grid(v0)?;
    if theta_count == 0 || opts.records == 0 {
        return Err(LabError::Config(
            "stability study needs theta samples and records".into(),
        ));
    }
    let cfg = SolveConfig {
        epsilon,
        ..base.clone()
    }
    .with_uniform_records(opts.records);
    let h0 = u0.difference(v0)?;
    let d0 = h0.l1_norm();
    let u = solve_viscous(sys, u0, &cfg)?;
    let v = solve_viscous(sys, v0, &cfg)?;
    let dist: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a.l1_distance(b)).collect::<Result<_>>()?;
    // midpoint rule in theta; u^theta starts from theta u0 + (1 - theta) v0
    let norms = (0..theta_count)
        .into_par_iter()
        .map(|k| {
            let theta = (k as f64 + 0.5) / theta_count as f64;
            let start = u0.blend(v0, theta)?;
            let sol = solve_tangent(sys, &start, std::slice::from_ref(&h0), &cfg)?;
            Ok(sol.h[0].iter().map(|h| h.l1_norm()).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let records = dist.len();
    let mean: Vec<f64> = (0..records)
        .map(|m| norms.iter().map(|n| n[m]).sum::<f64>() / theta_count as f64)
        .collect();
    let ratio = |x: f64| if d0 > 0.0 { x / d0 } else { 0.0 };
    let mut series = Series::new(["t", "distance", "ratio", "homotopy_mean"]);
    for m in 0..records {
        series.push(vec![u[m].t, dist[m], ratio(dist[m]), mean[m]]);
    }
    let l2 = dist.iter().map(|d| ratio(*d)).fold(0.0, f64::max);
    let l3 = mean.iter().map(|d| ratio(*d)).fold(0.0, f64::max);
    let excess = (0..records).map(|m| dist[m] - mean[m]).fold(0.0, f64::max);
    let slack = opts.slack_factor * u0.dx * d0;
    let bound = opts.bound.unwrap_or_else(|| default_l1_bound(sys));
    let mut r = EstimateReport::new(format!("stability:{}", sys.name));
    r.scalar("epsilon", epsilon)
        .scalar("initial_distance", d0)
        .scalar("l2_fit", l2)
        .scalar("l3_fit", l3)
        .scalar("theta_count", theta_count as f64)
        .scalar("homotopy_excess", excess)
        .scalar("homotopy_slack", slack);
    r.series = Some(series);
    r.check("l2_fit", l2, Relation::Le, bound);
    r.check("homotopy_excess", excess, Relation::Le, slack);
    Ok(r)
}

/// Compares `solve_linearized` along `u^theta` with the difference
/// quotient `(u^{theta + delta}(t) - u^theta(t)) / delta`, where
/// `u^theta` starts from `theta u0 + (1 - theta) v0`.
///
/// The run uses `fixed_dt` from `base` (required) and records every step
/// so that the linearized solve sees the exact discrete trajectory. The
/// check is `|h - quotient|_1 <= factor (delta + dx) |h0|_1` at `t_end`.
pub fn homotopy_identity_check(
    sys: &SystemSpec,
    u0: &GridField,
    v0: &GridField,
    theta: f64,
    delta: f64,
    base: &SolveConfig,
    factor: f64,
) -> Result<EstimateReport> {
    let dt = base
        .fixed_dt
        .ok_or_else(|| LabError::Config("homotopy identity check needs a fixed time step".into()))?;
    let steps = (base.t_end / dt).round() as usize;
    if steps == 0 || ((steps as f64) * dt - base.t_end).abs() > 1e-9 * base.t_end {
        return Err(LabError::Config("t_end must be a multiple of the fixed step".into()));
    }
    let h0 = u0.difference(v0)?;
    let start = u0.blend(v0, theta)?;
    let shifted = u0.blend(v0, theta + delta)?;
    let dense = base.clone().with_records((0..=steps).map(|k| k as f64 * dt).collect());
    let traj = solve_viscous(sys, &start, &dense)?;
    let end_cfg = base.clone().with_records(vec![base.t_end]);
    let h = solve_linearized(sys, &traj, &h0, &end_cfg)?;
    let moved = solve_viscous(sys, &shifted, &end_cfg)?;
    let quotient = moved[0].difference(traj.last().unwrap())?.scaled(1.0 / delta);
    let gap = quotient.l1_distance(&h[0])?;
    let budget = factor * (delta + u0.dx) * h0.l1_norm();
    let mut r = EstimateReport::new(format!("homotopy_identity:{}", sys.name));
    r.scalar("theta", theta)
        .scalar("delta", delta)
        .scalar("dx", u0.dx)
        .scalar("h_l1", h[0].l1_norm())
        .scalar("quotient_gap", gap);
    r.check("quotient_gap", gap, Relation::Le, budget);
    Ok(r)
}
