//! Convergence of viscous runs: to the exact semigroup as `eps -> 0`, and
//! self-convergence of the gradient-component residual under refinement.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::report::{EstimateReport, Relation, Series};
use crate::riemann::{exact_semigroup_decoupled, glued_evolution, solve_riemann, PiecewiseConstant};
use crate::system::SystemSpec;
use crate::viscous::{residual_v_equation, solve_viscous, SolveConfig};

use super::data::InitialData;
use super::fit::power_fit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceOptions {
    /// `e(eps_{k+1}) <= (1 + slack) e(eps_k)` for decreasing `eps`.
    pub slack: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions {
            slack: 0.1,
            p_min: 0.4,
            p_max: 1.1,
        }
    }
}

/// Moves every break to the cell interface the sampled data jump across:
/// a node at or right of a break carries the right state, so the discrete
/// jump sits half a cell left of the first such node.
fn snap_to_interfaces(p: &PiecewiseConstant, like: &GridField) -> Result<PiecewiseConstant> {
    let breaks = p
        .breaks
        .iter()
        .map(|b| {
            let k = ((b - like.x0) / like.dx).ceil();
            like.x0 + (k - 0.5) * like.dx
        })
        .collect();
    PiecewiseConstant::new(breaks, p.states.clone())
}

/// Exact solution `S_t u0` on the grid of `u0`, with the name of the
/// construction used.
pub fn exact_reference(
    sys: &SystemSpec,
    data: &InitialData,
    u0: &GridField,
    t: f64,
) -> Result<(GridField, &'static str)> {
    if let Some(p) = data.pieces() {
        let p = snap_to_interfaces(&p, u0)?;
        if p.breaks.len() == 1 {
            let fan = solve_riemann(sys, &p.states[0], &p.states[1])?;
            return Ok((fan.to_grid(t, p.breaks[0], u0), "riemann_fan"));
        }
        let glued = glued_evolution(sys, p)?;
        if t < glued.horizon {
            return Ok((glued.to_grid(t, u0)?, "glued"));
        }
        if sys.constant_frame.is_some() {
            let mut g = exact_semigroup_decoupled(sys, u0, t)?;
            g.t = t;
            return Ok((g, "front_tracking"));
        }
        return Err(LabError::InteractionReached {
            t,
            horizon: glued.horizon,
        });
    }
    if sys.constant_frame.is_some() {
        let mut g = exact_semigroup_decoupled(sys, u0, t)?;
        g.t = t;
        return Ok((g, "front_tracking"));
    }
    Err(LabError::NoReference(format!(
        "system '{}' has no constant frame and the data are not piecewise constant",
        sys.name
    )))
}

/// `e(eps) = |u^eps(t*) - S_t* u0|_1` for every `eps`, the monotonicity of
/// `e` along decreasing `eps` and the fitted order `e ~ C eps^p`.
pub fn vanishing_viscosity_study(
    sys: &SystemSpec,
    data: &InitialData,
    u0: &GridField,
    eps_list: &[f64],
    t_star: f64,
    base: &SolveConfig,
    opts: &ConvergenceOptions,
) -> Result<EstimateReport> {
    if eps_list.len() < 2 {
        return Err(LabError::Config(
            "vanishing viscosity study needs at least two viscosities".into(),
        ));
    }
    let (reference, kind) = exact_reference(sys, data, u0, t_star)?;
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let errors = eps
        .par_iter()
        .map(|&e| {
            let cfg = SolveConfig {
                epsilon: e,
                t_end: t_star,
                ..base.clone()
            }
            .with_records(vec![t_star]);
            let out = solve_viscous(sys, u0, &cfg)?;
            out[0].l1_distance(&reference)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut series = Series::new(["epsilon", "error"]);
    for (e, err) in eps.iter().zip(&errors) {
        series.push(vec![*e, *err]);
    }
    let worst_ratio = errors
        .windows(2)
        .map(|w| {
            if w[1] == 0.0 {
                0.0
            } else if w[0] == 0.0 {
                f64::INFINITY
            } else {
                w[1] / w[0]
            }
        })
        .fold(0.0, f64::max);
    let mut r = EstimateReport::new(format!("vanishing_viscosity:{}", sys.name));
    r.scalar("t_star", t_star)
        .scalar("dx", u0.dx)
        .scalar("error_max", errors.iter().cloned().fold(0.0, f64::max))
        .scalar("error_min", errors.iter().cloned().fold(f64::INFINITY, f64::min))
        .scalar("worst_step_ratio", worst_ratio);
    r.series = Some(series);
    r.scalars.insert(format!("reference_{kind}"), 1.0);
    r.check("worst_step_ratio", worst_ratio, Relation::Le, 1.0 + opts.slack);
    if errors.iter().any(|e| *e > 0.0) {
        let fit =
            power_fit(&eps, &errors).ok_or_else(|| LabError::Config("error fit needs two positive errors".into()))?;
        r.scalar("order_p", fit.exponent);
        r.check_within("order_p", fit.exponent, opts.p_min, opts.p_max);
        r.fit = Some(fit);
    }
    Ok(r)
}

/// Mismatch of the gradient-component equations at `t1` on successively
/// refined grids, with record spacing `0.1 dx` around `t1`, and its fitted
/// order in `dx`.
#[allow(clippy::too_many_arguments)]
pub fn residual_study(
    sys: &SystemSpec,
    data: &InitialData,
    span: (f64, f64),
    cells: &[usize],
    epsilon: f64,
    t1: f64,
    base: &SolveConfig,
    min_order: f64,
) -> Result<EstimateReport> {
    if cells.len() < 2 {
        return Err(LabError::Config("residual study needs at least two resolutions".into()));
    }
    let rows = cells
        .par_iter()
        .map(|&m| {
            let u0 = data.sample(sys, span.0, span.1, m)?;
            let tau = 0.1 * u0.dx;
            let cfg = SolveConfig {
                epsilon,
                t_end: t1 + tau,
                ..base.clone()
            }
            .with_records(vec![t1 - tau, t1, t1 + tau]);
            let traj = solve_viscous(sys, &u0, &cfg)?;
            let rep = residual_v_equation(sys, &traj, epsilon)?;
            Ok((u0.dx, rep.get("mismatch_l1_max").unwrap_or(0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let dx: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mismatch: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let mut series = Series::new(["dx", "mismatch"]);
    for r in &rows {
        series.push(vec![r.0, r.1]);
    }
    let mut r = EstimateReport::new(format!("v_residual_convergence:{}", sys.name));
    r.scalar("epsilon", epsilon).scalar("t", t1);
    r.series = Some(series);
    if mismatch.iter().all(|m| *m == 0.0) {
        r.scalar("order", f64::INFINITY.min(f64::MAX));
        return Ok(r);
    }
    let fit = power_fit(&dx, &mismatch).ok_or_else(|| LabError::Config("residual fit failed".into()))?;
    r.scalar("order", fit.exponent);
    r.check("order", fit.exponent, Relation::Ge, min_order);
    r.fit = Some(fit);
    Ok(r)
}
