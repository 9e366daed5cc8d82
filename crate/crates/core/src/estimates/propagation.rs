//! Exponential smallness of `u - v` outside the cone spreading from the
//! set where the data differ.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::report::{EstimateReport, Relation, Series};
use crate::system::SystemSpec;
use crate::viscous::{solve_viscous, SolveConfig};

use super::fit::linear_fit;
use super::sources::spectral_bounds;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropagationOptions {
    pub records: usize,
    /// Fixed window `[x_lo, x_hi]` right of the support for the slope fit.
    /// Without it both tails are fitted where the difference lies between
    /// `floor` and `1e-3` times its initial sup norm.
    pub fit_window: Option<(f64, f64)>,
    pub floor: f64,
    /// Allowed difference outside the widened cone, relative to the
    /// initial sup norm.
    pub outside_tol: f64,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions {
            records: 10,
            fit_window: None,
            floor: 1e-12,
            outside_tol: 1e-6,
        }
    }
}

/// Slope of `ln d` against `x` over the selected points.
fn log_slope(x: &[f64], d: &[f64], keep: impl Fn(f64, f64) -> bool) -> Option<(f64, usize)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(d)
        .filter(|(x, d)| **d > 0.0 && keep(**x, **d))
        .map(|(x, d)| (*x, d.ln()))
        .unzip();
    if xs.len() < 3 {
        return None;
    }
    linear_fit(&xs, &ys).map(|(_, b, _)| (b, xs.len()))
}

/// `beta1 = 2 max |lambda|` over both runs; margin `m = 10 sqrt(eps t)`.
pub fn propagation_study(
    sys: &SystemSpec,
    u0: &GridField,
    v0: &GridField,
    support: (f64, f64),
    epsilon: f64,
    base: &SolveConfig,
    opts: &PropagationOptions,
) -> Result<EstimateReport> {
    u0.require_same_grid(v0)?;
    let (a, b) = support;
    if !(b >= a) {
        return Err(LabError::Config("support interval must satisfy a <= b".into()));
    }
    let diff0 = u0.difference(v0)?;
    let sup0 = diff0.sup_norm();
    let stray = (0..diff0.len())
        .filter(|&j| diff0.x(j) < a || diff0.x(j) > b)
        .map(|j| diff0.norm_at(j))
        .fold(0.0, f64::max);
    if stray > 1e-14 * sup0 {
        return Err(LabError::Config(format!("data differ by {stray:e} outside [{a}, {b}]")));
    }
    let t = base.t_end;
    let cfg = SolveConfig {
        epsilon,
        ..base.clone()
    }
    .with_uniform_records(opts.records.max(1));
    let u = solve_viscous(sys, u0, &cfg)?;
    let v = solve_viscous(sys, v0, &cfg)?;
    let all: Vec<GridField> = u.iter().chain(&v).cloned().collect();
    let beta1 = 2.0 * spectral_bounds(sys, &all)?.max_speed();
    let margin = 10.0 * (epsilon * t).sqrt();
    let (lo, hi) = (a - beta1 * t - margin, b + beta1 * t + margin);
    let d_field = u.last().unwrap().difference(v.last().unwrap())?;
    let x: Vec<f64> = (0..d_field.len()).map(|j| d_field.x(j)).collect();
    let d: Vec<f64> = (0..d_field.len()).map(|j| d_field.norm_at(j)).collect();
    let outside = x
        .iter()
        .zip(&d)
        .filter(|(x, _)| **x < lo || **x > hi)
        .map(|(_, d)| *d)
        .fold(0.0, f64::max);

    let (right, left) = match opts.fit_window {
        Some((w0, w1)) => (log_slope(&x, &d, |x, _| x >= w0 && x <= w1), None),
        None => {
            let band = |d: f64| d >= opts.floor * sup0 && d <= 1e-3 * sup0;
            (
                log_slope(&x, &d, |x, d| x > b && band(d)),
                log_slope(&x, &d, |x, d| x < a && band(d)),
            )
        }
    };
    let rates: Vec<f64> = [right.map(|r| -r.0), left.map(|l| l.0)].into_iter().flatten().collect();
    let rate = rates.iter().cloned().reduce(f64::min);

    let mut series = Series::new(["x", "difference"]);
    for (x, d) in x.iter().zip(&d) {
        series.push(vec![*x, *d]);
    }
    let mut r = EstimateReport::new(format!("propagation:{}", sys.name));
    r.scalar("epsilon", epsilon)
        .scalar("t", t)
        .scalar("beta1", beta1)
        .scalar("margin", margin)
        .scalar("cone_left", lo)
        .scalar("cone_right", hi)
        .scalar("initial_sup", sup0)
        .scalar("outside_max", outside);
    if let Some((s, k)) = right {
        r.scalar("decay_rate_right", -s).scalar("fit_points_right", k as f64);
    }
    if let Some((s, k)) = left {
        r.scalar("decay_rate_left", s).scalar("fit_points_left", k as f64);
    }
    r.series = Some(series);
    r.check("outside_max", outside, Relation::Le, opts.outside_tol * sup0);
    if sup0 > 0.0 {
        // no tail at all counts as a failed fit
        let c_star = rate.map_or(0.0, |k| k * epsilon);
        if let Some(k) = rate {
            r.scalar("decay_rate", k);
        }
        r.scalar("decay_constant", c_star);
        r.check("decay_constant", c_star, Relation::Ge, f64::MIN_POSITIVE);
    }
    Ok(r)
}
