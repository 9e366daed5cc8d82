//! Uniform total variation bounds across viscosities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::report::{EstimateReport, Relation, Series};
use crate::system::SystemSpec;
use crate::viscous::{solve_viscous, total_variation, SolveConfig};

use super::sources::{cumulative_trapezoid, phi_fields};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BvOptions {
    /// Number of record intervals per run.
    pub records: usize,
    /// Smallness parameter; the source budget is `delta0 / 2`.
    pub delta0: f64,
    /// Bound on `sup_t TV(u(t)) / TV(u0)`; see [`default_tv_bound`] when absent.
    pub bound: Option<f64>,
}

impl Default for BvOptions {
    fn default() -> Self {
        BvOptions {
            records: 40,
            delta0: 0.1,
            bound: None,
        }
    }
}

/// `1 + 1e-6` for scalar laws (maximum principle), `cond(R) (1 + 1e-6)`
/// for constant-frame systems (each characteristic component is
/// TV-diminishing), and 3 otherwise.
pub fn default_tv_bound(sys: &SystemSpec) -> f64 {
    if sys.n == 1 {
        1.0 + 1e-6
    } else if let Some(cf) = &sys.constant_frame {
        cf.condition_number() * (1.0 + 1e-6)
    } else {
        3.0
    }
}

/// `L1 = max over eps of sup_t TV(u^eps(t)) / TV(u0)`, together with the
/// accumulated sources `sum_i int int |phi_i|` of every run.
pub fn bv_study(
    sys: &SystemSpec,
    u0: &GridField,
    eps_list: &[f64],
    base: &SolveConfig,
    opts: &BvOptions,
) -> Result<EstimateReport> {
    if eps_list.is_empty() || opts.records == 0 {
        return Err(LabError::Config("bv study needs viscosities and records".into()));
    }
    let tv0 = total_variation(u0);
    let runs = eps_list
        .par_iter()
        .map(|&eps| {
            let cfg = SolveConfig {
                epsilon: eps,
                ..base.clone()
            }
            .with_uniform_records(opts.records);
            let traj = solve_viscous(sys, u0, &cfg)?;
            let tv_sup = traj.iter().map(total_variation).fold(0.0, f64::max);
            let t: Vec<f64> = traj.iter().map(|f| f.t).collect();
            let phi: Vec<f64> = traj
                .iter()
                .map(|f| Ok(phi_fields(sys, f, eps)?.iter().map(|g| g.l1_norm()).sum()))
                .collect::<Result<_>>()?;
            let phi_total = *cumulative_trapezoid(&t, &phi).last().unwrap();
            Ok((eps, tv_sup, phi_total))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratio = |tv: f64| if tv0 > 0.0 { tv / tv0 } else { 0.0 };
    let mut series = Series::new(["epsilon", "tv_sup", "tv_ratio", "phi_integral"]);
    for (eps, tv, phi) in &runs {
        series.push(vec![*eps, *tv, ratio(*tv), *phi]);
    }
    let l1 = runs.iter().map(|r| ratio(r.1)).fold(0.0, f64::max);
    let tv_sup = runs.iter().map(|r| r.1).fold(0.0, f64::max);
    let phi_max = runs.iter().map(|r| r.2).fold(0.0, f64::max);
    let bound = opts.bound.unwrap_or_else(|| default_tv_bound(sys));
    let mut r = EstimateReport::new(format!("bv:{}", sys.name));
    r.scalar("tv_initial", tv0)
        .scalar("tv_sup", tv_sup)
        .scalar("l1_fit", l1)
        .scalar("phi_integral_max", phi_max)
        .scalar("delta0", opts.delta0);
    r.series = Some(series);
    r.check("l1_fit", l1, Relation::Le, bound);
    r.check("phi_integral_max", phi_max, Relation::Le, 0.5 * opts.delta0);
    Ok(r)
}
