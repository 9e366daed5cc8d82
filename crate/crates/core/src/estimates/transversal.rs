//! Decay of the interaction potential along a viscous run.
//!
//! For the slower family `z = v_i` and the faster family `z# = v_j` the
//! quantity `Q(t) + int_0^t int |z z#|` can grow only through the sources
//! `phi`, by at most `(|phi_i|_1 |z#|_1 + |z|_1 |phi_j|_1) / c` per unit
//! time. The check records that budget and the total interaction against
//! `E_1 E_2 / c`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::report::{EstimateReport, Relation, Series};
use crate::system::SystemSpec;
use crate::viscous::gradient_decompose;

use super::kernel::{interaction_potential, overlap, InteractionKernel};
use super::sources::{cumulative_trapezoid, phi_fields, spectral_bounds};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransversalOptions {
    /// Allowed growth of `Q + int int |z z#|` beyond the source budget,
    /// relative to its initial value.
    pub quadrature_tol: f64,
    /// Required relative margin in `int int |z z#| <= (1 - margin) E_1 E_2 / c`.
    pub margin: f64,
    /// Number of spatial shifts tried in the `I_1` diagnostic.
    pub i1_shifts: usize,
}

impl Default for TransversalOptions {
    fn default() -> Self {
        TransversalOptions {
            quadrature_tol: 1e-3,
            margin: 0.05,
            i1_shifts: 64,
        }
    }
}

/// Kernel with the measured speed gap of families `i < j` along `traj` and
/// `c1` covering both the physical viscosity `eps mu` and the numerical
/// viscosity `max|lambda| dx / 2` of the scheme.
pub fn kernel_for_run(
    sys: &SystemSpec,
    traj: &[GridField],
    epsilon: f64,
    i: usize,
    j: usize,
) -> Result<InteractionKernel> {
    let b = spectral_bounds(sys, traj)?;
    let gap = b.lambda_min[j] - b.lambda_max[i];
    if !(gap > 0.0) {
        return Err(LabError::SpeedGapViolated { gap });
    }
    let dx = traj.first().map_or(0.0, |f| f.dx);
    InteractionKernel::new(gap, epsilon * b.mu_max + 0.5 * b.max_speed() * dx)
}

/// `sup_{tau, xi} int_0^{T - tau} int |z_x(t, x) z#(t + tau, x + xi)|` over
/// up to eight record offsets `tau` and a stride of grid shifts `xi`.
fn i1_diagnostic(t: &[f64], z: &[GridField], zs: &[GridField], shifts: usize) -> f64 {
    let records = t.len();
    if records < 2 {
        return 0.0;
    }
    let len = z[0].len();
    let dx = z[0].dx;
    let zx: Vec<Vec<f64>> = z
        .iter()
        .map(|f| {
            (0..len)
                .map(|m| (f.values[(m + 1).min(len - 1)] - f.values[m.saturating_sub(1)]) / (2.0 * dx))
                .collect()
        })
        .collect();
    let stride = (2 * len / shifts.max(1)).max(1);
    let max_shift = len as isize;
    let mut best: f64 = 0.0;
    for off in (0..records).step_by((records / 8).max(1)) {
        let mut xi = -max_shift;
        while xi < max_shift {
            let mut rows = Vec::with_capacity(records - off);
            for k in 0..records - off {
                let b = &zs[k + off].values;
                let s: f64 = (0..len)
                    .filter_map(|m| {
                        let q = m as isize + xi;
                        (q >= 0 && (q as usize) < len).then(|| (zx[k][m] * b[q as usize]).abs())
                    })
                    .sum::<f64>()
                    * dx;
                rows.push(s);
            }
            let tt: Vec<f64> = t[..records - off].to_vec();
            let total = *cumulative_trapezoid(&tt, &rows).last().unwrap_or(&0.0);
            best = best.max(total);
            xi += stride as isize;
        }
    }
    best
}

/// Interaction bookkeeping for families `i` (slower) and `j` (faster) along
/// a densely recorded trajectory of `u_t + A u_x = eps (B u_x)_x`.
pub fn transversal_decay_check(
    sys: &SystemSpec,
    traj: &[GridField],
    epsilon: f64,
    pair: (usize, usize),
    kernel: &InteractionKernel,
    opts: &TransversalOptions,
) -> Result<EstimateReport> {
    let (i, j) = pair;
    if i == j || i >= sys.n || j >= sys.n {
        return Err(LabError::Config(format!(
            "families ({i}, {j}) must be distinct and below {}",
            sys.n
        )));
    }
    if traj.len() < 2 {
        return Err(LabError::InsufficientRecords {
            needed: 2,
            got: traj.len(),
        });
    }
    for f in traj {
        f.require_same_grid(&traj[0])?;
    }
    let bounds = spectral_bounds(sys, traj)?;
    let gap = bounds.lambda_min[j] - bounds.lambda_max[i];
    if !(gap >= kernel.c) {
        return Err(LabError::SpeedGapViolated { gap });
    }
    let dx = traj[0].dx;
    let c1_required = epsilon * bounds.mu_max + 0.5 * bounds.max_speed() * dx;

    let t: Vec<f64> = traj.iter().map(|f| f.t).collect();
    let mut z = Vec::new();
    let mut zs = Vec::new();
    let mut phi_i = Vec::new();
    let mut phi_j = Vec::new();
    for u in traj {
        let v = gradient_decompose(sys, u)?;
        let phi = phi_fields(sys, u, epsilon)?;
        z.push(v[i].clone());
        zs.push(v[j].clone());
        phi_i.push(phi[i].l1_norm());
        phi_j.push(phi[j].l1_norm());
    }
    let q: Vec<f64> = z
        .iter()
        .zip(&zs)
        .map(|(a, b)| interaction_potential(a, b, kernel))
        .collect::<Result<_>>()?;
    let ov: Vec<f64> = z.iter().zip(&zs).map(|(a, b)| overlap(a, b)).collect::<Result<_>>()?;
    let cum_ov = cumulative_trapezoid(&t, &ov);
    let rate: Vec<f64> = (0..t.len())
        .map(|k| (phi_i[k] * zs[k].l1_norm() + z[k].l1_norm() * phi_j[k]) / kernel.c)
        .collect();
    let budget = cumulative_trapezoid(&t, &rate);
    let cum_phi_i = *cumulative_trapezoid(&t, &phi_i).last().unwrap();
    let cum_phi_j = *cumulative_trapezoid(&t, &phi_j).last().unwrap();
    let m: Vec<f64> = q.iter().zip(&cum_ov).map(|(a, b)| a + b).collect();
    let excess = (1..m.len())
        .map(|k| (m[k] - m[k - 1]) - (budget[k] - budget[k - 1]))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    let e1 = z[0].l1_norm() + cum_phi_i;
    let e2 = zs[0].l1_norm() + cum_phi_j;
    let bound = e1 * e2 / kernel.c;
    // rounding floor for runs where the families never meet
    let tol = opts.quadrature_tol * m[0] + 1e-12 * e1.max(e2).powi(2) / kernel.c;
    let total = *cum_ov.last().unwrap();
    let ratio = if bound > 0.0 { total / bound } else { 0.0 };

    let mut series = Series::new([
        "t",
        "q",
        "overlap",
        "cumulative_overlap",
        "q_plus_overlap",
        "phi_budget",
    ]);
    for k in 0..t.len() {
        series.push(vec![t[k], q[k], ov[k], cum_ov[k], m[k], budget[k]]);
    }
    let zx_l1 = z
        .iter()
        .map(|f| (1..f.len()).map(|m| (f.values[m] - f.values[m - 1]).abs()).sum::<f64>())
        .fold(0.0, f64::max);

    let mut r = EstimateReport::new(format!("transversal:{}:{}-{}", sys.name, i + 1, j + 1));
    r.scalar("epsilon", epsilon)
        .scalar("c", kernel.c)
        .scalar("c1", kernel.c1)
        .scalar("gap_measured", gap)
        .scalar("c1_required", c1_required)
        .scalar("q_initial", q[0])
        .scalar("q_final", *q.last().unwrap())
        .scalar("interaction_integral", total)
        .scalar("e1", e1)
        .scalar("e2", e2)
        .scalar("bound", bound)
        .scalar("bound_ratio", ratio)
        .scalar("phi_integral_i", cum_phi_i)
        .scalar("phi_integral_j", cum_phi_j)
        .scalar("bookkeeping_excess", excess)
        .scalar("bookkeeping_tolerance", tol)
        .scalar("i1_diagnostic", i1_diagnostic(&t, &z, &zs, opts.i1_shifts))
        .scalar("z_l1_max", z.iter().map(|f| f.l1_norm()).fold(0.0, f64::max))
        .scalar("zx_l1_max", zx_l1)
        .scalar("zsharp_linf_max", zs.iter().map(|f| f.sup_norm()).fold(0.0, f64::max));
    r.series = Some(series);
    r.check("kernel_c1_covers_viscosity", kernel.c1, Relation::Ge, c1_required);
    r.check("bookkeeping_excess", excess, Relation::Le, tol);
    r.check("interaction_bound_ratio", ratio, Relation::Le, 1.0 - opts.margin);
    Ok(r)
}
