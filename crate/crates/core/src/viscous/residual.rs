//! Discrete consistency of the gradient-component equations
//! `v_i,t + (lambda_i v_i)_x - eps (mu_i v_i)_xx = phi_i` along a trajectory.

use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::frame::frame_fast;
use crate::grid::GridField;
use crate::report::EstimateReport;
use crate::system::SystemSpec;

use super::coefficients::source_coefficients;
use super::decompose::gradient_decompose;

/// L1 mismatch between both sides, per family, at every interior record.
///
/// Time derivatives use the three-point formula on the (possibly uneven)
/// record spacing; space derivatives are central. Two nodes at each end are
/// excluded so that the one-sided end gradients do not enter. Scalars:
/// `mismatch_l1_i` (largest over records), `lhs_l1_i` (size of the left side
/// at that record) and `records`.
pub fn residual_v_equation(sys: &SystemSpec, u_traj: &[GridField], epsilon: f64) -> Result<EstimateReport> {
    if u_traj.len() < 3 {
        return Err(LabError::InsufficientRecords {
            needed: 3,
            got: u_traj.len(),
        });
    }
    let first = &u_traj[0];
    for f in u_traj {
        f.require_same_grid(first)?;
    }
    let len = first.len();
    if len < 7 {
        return Err(LabError::Config("residual needs at least seven nodes".into()));
    }
    let n = sys.n;
    let dx = first.dx;
    let vs: Vec<Vec<GridField>> = u_traj
        .iter()
        .map(|u| gradient_decompose(sys, u))
        .collect::<Result<_>>()?;
    let mut worst = vec![0.0_f64; n];
    let mut scale = vec![0.0_f64; n];
    for k in 1..u_traj.len() - 1 {
        let (t0, t1, t2) = (u_traj[k - 1].t, u_traj[k].t, u_traj[k + 1].t);
        let (a, b) = (t1 - t0, t2 - t1);
        if !(a > 0.0 && b > 0.0) {
            return Err(LabError::Config("record times must be strictly increasing".into()));
        }
        // weights of f(t0), f(t1), f(t2) in f'(t1)
        let w0 = -b / (a * (a + b));
        let w1 = (b - a) / (a * b);
        let w2 = a / (b * (a + b));
        let u = &u_traj[k];
        let frames = (0..len).map(|j| frame_fast(sys, u.at(j))).collect::<Result<Vec<_>>>()?;
        let v = &vs[k];
        let coeffs = (2..len - 2)
            .into_par_iter()
            .map(|j| source_coefficients(sys, u.at(j)))
            .collect::<Result<Vec<_>>>()?;
        let mut mismatch = vec![0.0; n];
        let mut lhs_norm = vec![0.0; n];
        for j in 2..len - 2 {
            let vj: Vec<f64> = (0..n).map(|i| v[i].values[j]).collect();
            let vx: Vec<f64> = (0..n)
                .map(|i| (v[i].values[j + 1] - v[i].values[j - 1]) / (2.0 * dx))
                .collect();
            let phi = coeffs[j - 2].phi(&vj, &vx, epsilon);
            for i in 0..n {
                let vt = w0 * vs[k - 1][i].values[j] + w1 * vs[k][i].values[j] + w2 * vs[k + 1][i].values[j];
                let lv = |m: usize| frames[m].lambda[i] * v[i].values[m];
                let mv = |m: usize| frames[m].mu[i] * v[i].values[m];
                let conv = (lv(j + 1) - lv(j - 1)) / (2.0 * dx);
                let diff = (mv(j + 1) - 2.0 * mv(j) + mv(j - 1)) / (dx * dx);
                let lhs = vt + conv - epsilon * diff;
                mismatch[i] += (lhs - phi[i]).abs() * dx;
                lhs_norm[i] += lhs.abs() * dx;
            }
        }
        for i in 0..n {
            if mismatch[i] > worst[i] {
                worst[i] = mismatch[i];
                scale[i] = lhs_norm[i];
            }
        }
    }
    let mut report = EstimateReport::new(format!("v_equation_residual:{}", sys.name));
    report.scalar("records", u_traj.len() as f64);
    report.scalar("dx", dx);
    report.scalar("epsilon", epsilon);
    for i in 0..n {
        report.scalar(format!("mismatch_l1_{}", i + 1), worst[i]);
        report.scalar(format!("lhs_l1_{}", i + 1), scale[i]);
    }
    report.scalar("mismatch_l1_max", worst.iter().cloned().fold(0.0, f64::max));
    Ok(report)
}
