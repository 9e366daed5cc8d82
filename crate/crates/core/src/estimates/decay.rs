//! Parabolic smoothing shapes `|u_xx(t)|_1 ~ C / sqrt(t)` and
//! `|h_x(t)|_1 ~ C / sqrt(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::report::{EstimateReport, Series};
use crate::system::SystemSpec;
use crate::viscous::{central_gradient, second_difference, solve_tangent, SolveConfig};

use super::fit::power_fit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayOptions {
    pub records: usize,
    /// Fits use `t >= t_min_fraction * t_end`.
    pub t_min_fraction: f64,
    pub exponent_min: f64,
    pub exponent_max: f64,
}

impl Default for DecayOptions {
    fn default() -> Self {
        DecayOptions {
            records: 40,
            t_min_fraction: 0.05,
            exponent_min: -0.65,
            exponent_max: -0.35,
        }
    }
}

/// Fitted power-law exponents of `|u_xx|_1` and `|h_x|_1` along one run.
pub fn decay_study(
    sys: &SystemSpec,
    u0: &GridField,
    h0: &GridField,
    base: &SolveConfig,
    opts: &DecayOptions,
) -> Result<EstimateReport> {
    if opts.records < 2 {
        return Err(LabError::Config("decay study needs at least two records".into()));
    }
    let cfg = base.clone().with_uniform_records(opts.records);
    let sol = solve_tangent(sys, u0, std::slice::from_ref(h0), &cfg)?;
    let t_min = opts.t_min_fraction * base.t_end;
    let mut series = Series::new(["t", "uxx_l1", "hx_l1"]);
    let (mut t, mut uxx, mut hx) = (Vec::new(), Vec::new(), Vec::new());
    for (u, h) in sol.u.iter().zip(&sol.h[0]) {
        let a = second_difference(u).l1_norm();
        let b = central_gradient(h).l1_norm();
        series.push(vec![u.t, a, b]);
        if u.t >= t_min && u.t > 0.0 {
            t.push(u.t);
            uxx.push(a);
            hx.push(b);
        }
    }
    let mut r = EstimateReport::new(format!("decay:{}", sys.name));
    r.scalar("epsilon", base.epsilon).scalar("t_min", t_min);
    for (name, y) in [("uxx", &uxx), ("hx", &hx)] {
        let fit =
            power_fit(&t, y).ok_or_else(|| LabError::Config(format!("{name} decay fit needs positive values")))?;
        r.scalar(format!("{name}_exponent"), fit.exponent)
            .scalar(format!("{name}_constant"), fit.constant)
            .scalar(format!("{name}_residual"), fit.residual);
        r.check_within(
            &format!("{name}_exponent"),
            fit.exponent,
            opts.exponent_min,
            opts.exponent_max,
        );
    }
    r.series = Some(series);
    Ok(r)
}
