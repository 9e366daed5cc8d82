//! First-variation equation
//!
//! ```text
//! h_t + (h . A(u)) u_x + A(u) h_x = eps (B(u) h_x + (h . B(u)) u_x)_x
//! ```
//!
//! discretised with the same scheme class as the state: in flux form the
//! convective flux is `(A_k h_k + A_{k+1} h_{k+1})/2` with the state's
//! dissipation coefficients applied to `h`, and the diffusive flux is
//! `eps (B(m) dh + DB(m)[h_m] du) / dx`.

use nalgebra::{DMatrix, DVector};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::system::SystemSpec;

use super::config::SolveConfig;
use super::solver::{clamp_step, Scheme, StepData};

/// `Dm(u)[h]` by central differences on the unit direction, scaled by `|h|`
/// so that the result is linear in `h`.
pub(crate) fn matrix_derivative(m: impl Fn(&[f64]) -> DMatrix<f64>, u: &[f64], h: &[f64], step: f64) -> DMatrix<f64> {
    let norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n = u.len();
    if norm == 0.0 {
        return DMatrix::zeros(n, n);
    }
    let plus: Vec<f64> = u.iter().zip(h).map(|(a, b)| a + step * b / norm).collect();
    let minus: Vec<f64> = u.iter().zip(h).map(|(a, b)| a - step * b / norm).collect();
    (m(&plus) - m(&minus)) * (norm / (2.0 * step))
}

impl Scheme<'_> {
    /// Time derivative of the tangent field `h` along the state `u`.
    pub(crate) fn tangent_rhs(&self, u: &[f64], data: &StepData, h: &[f64]) -> Vec<f64> {
        let n = self.sys.n;
        let dx = self.dx;
        let scale = self.cfg.epsilon / dx;
        let step = self.sys.tol.fd_step;
        let seg = |w: &[f64], j: usize| DVector::from_column_slice(&w[j * n..(j + 1) * n]);
        let drift: Vec<Vec<f64>> = if self.flux_form {
            (0..self.nodes)
                .map(|j| self.drift_flat(&u[j * n..(j + 1) * n], &data.node.lambda[j * n..(j + 1) * n]))
                .collect()
        } else {
            Vec::new()
        };
        let apply = |m: &[f64], j: usize| -> Vec<f64> {
            (0..n)
                .map(|a| (0..n).map(|c| m[a * n + c] * h[j * n + c]).sum())
                .collect()
        };
        let mut fluxes = vec![0.0; self.interfaces() * n];
        for k in 0..self.interfaces() {
            let r = self.right_of(k);
            let du = seg(u, r) - seg(u, k);
            let dh: Vec<f64> = (0..n).map(|c| h[r * n + c] - h[k * n + c]).collect();
            let g = &mut fluxes[k * n..(k + 1) * n];
            if self.flux_form {
                let (ak, ar) = (apply(&drift[k], k), apply(&drift[r], r));
                for c in 0..n {
                    g[c] = 0.5 * (ak[c] + ar[c]);
                }
                self.dissipate(data, k, &dh, g);
            }
            if self.cfg.epsilon > 0.0 {
                let m = &data.mid_state[k * n..(k + 1) * n];
                let hm: Vec<f64> = (0..n).map(|c| 0.5 * (h[k * n + c] + h[r * n + c])).collect();
                let b = &data.mid.visc[k * n * n..(k + 1) * n * n];
                let db =
                    matrix_derivative(|v| DMatrix::from_row_slice(n, n, &self.viscosity_flat(v)), m, &hm, step) * &du;
                for a in 0..n {
                    let bd: f64 = (0..n).map(|c| b[a * n + c] * dh[c]).sum();
                    g[a] -= (bd + db[a]) * scale;
                }
            }
        }
        let mut out = vec![0.0; h.len()];
        let last = self.nodes - 1;
        let ends = self.flux_form.then(|| (apply(&drift[0], 0), apply(&drift[last], last)));
        self.divergence(&fluxes, ends.as_ref().map(|e| (&e.0[..], &e.1[..])), &mut out);
        if !self.flux_form {
            let mut conv = vec![0.0; n];
            for j in 0..self.nodes {
                self.upwind_convection(j, data, h, &mut conv);
                let (jl, jr) = self.neighbours(j);
                let ux = (seg(u, jr) - seg(u, jl)) / (2.0 * dx);
                let da = matrix_derivative(
                    |v| self.sys.drift(v),
                    &u[j * n..(j + 1) * n],
                    &h[j * n..(j + 1) * n],
                    step,
                );
                let source = da * ux;
                for c in 0..n {
                    out[j * n + c] -= conv[c] + source[c];
                }
            }
        }
        out
    }
}

/// State and tangent records from one joint integration.
#[derive(Debug, Clone)]
pub struct TangentSolution {
    pub u: Vec<GridField>,
    /// `h[m][k]` is the `m`-th tangent at the `k`-th record time.
    pub h: Vec<Vec<GridField>>,
}

fn check_tangent(h0: &GridField, u0: &GridField) -> Result<()> {
    h0.require_same_grid(u0)?;
    if h0.values.iter().any(|v| !v.is_finite()) {
        return Err(LabError::Instability { t: 0.0 });
    }
    Ok(())
}

/// Advances the state and any number of tangent fields with one shared
/// step sequence, so the tangents see the state exactly as the scheme does.
pub fn solve_tangent(
    sys: &SystemSpec,
    u0: &GridField,
    h0s: &[GridField],
    cfg: &SolveConfig,
) -> Result<TangentSolution> {
    let scheme = Scheme::new(sys, cfg, u0)?;
    for h0 in h0s {
        check_tangent(h0, u0)?;
    }
    let mut u = u0.values.clone();
    let mut hs: Vec<Vec<f64>> = h0s.iter().map(|h| h.values.clone()).collect();
    let mut data = scheme.prepare(&u)?;
    let mut out_u = Vec::new();
    let mut out_h: Vec<Vec<GridField>> = vec![Vec::new(); h0s.len()];
    let mut t = 0.0;
    let snapshot = |values: &[f64], t: f64| GridField {
        x0: u0.x0,
        dx: u0.dx,
        t,
        ncomp: u0.ncomp,
        values: values.to_vec(),
    };
    for target in cfg.records() {
        let target = target.min(cfg.t_end);
        while t < target {
            let (dt, reached) = clamp_step(t, target, scheme.dt(&data));
            let rates: Vec<Vec<f64>> = hs.iter().map(|h| scheme.tangent_rhs(&u, &data, h)).collect();
            let rate = scheme.rhs(&u, &data);
            for (v, r) in u.iter_mut().zip(&rate) {
                *v += dt * r;
            }
            for (h, rate) in hs.iter_mut().zip(&rates) {
                for (v, r) in h.iter_mut().zip(rate) {
                    *v += dt * r;
                }
            }
            t = if reached { target } else { t + dt };
            scheme.check_state(&u, t, u0.x0)?;
            if hs.iter().flatten().any(|v| !v.is_finite()) {
                return Err(LabError::Instability { t });
            }
            data = scheme.prepare(&u)?;
        }
        out_u.push(snapshot(&u, t));
        for (m, h) in hs.iter().enumerate() {
            out_h[m].push(snapshot(h, t));
        }
    }
    Ok(TangentSolution { u: out_u, h: out_h })
}

/// State at time `t` by linear interpolation between records.
fn interpolate(traj: &[GridField], t: f64) -> Vec<f64> {
    let k = traj.partition_point(|f| f.t <= t);
    if k == 0 {
        return traj[0].values.clone();
    }
    if k == traj.len() {
        return traj[k - 1].values.clone();
    }
    let (a, b) = (&traj[k - 1], &traj[k]);
    let span = b.t - a.t;
    let theta = if span > 0.0 { (t - a.t) / span } else { 0.0 };
    if theta <= 1e-12 {
        return a.values.clone();
    }
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x + theta * (y - x))
        .collect()
}

/// Integrates the first-variation equation along a recorded trajectory.
///
/// The state between records is interpolated linearly in time, so the
/// trajectory should be recorded densely; records at every step of a
/// fixed-step run reproduce the state exactly.
pub fn solve_linearized(
    sys: &SystemSpec,
    u_traj: &[GridField],
    h0: &GridField,
    cfg: &SolveConfig,
) -> Result<Vec<GridField>> {
    if u_traj.len() < 2 {
        return Err(LabError::InsufficientRecords {
            needed: 2,
            got: u_traj.len(),
        });
    }
    let first = &u_traj[0];
    for f in u_traj {
        f.require_same_grid(first)?;
    }
    if first.t > 0.0 || u_traj[u_traj.len() - 1].t < cfg.t_end * (1.0 - 1e-12) {
        return Err(LabError::Config(format!(
            "trajectory covers [{}, {}], solve needs [0, {}]",
            first.t,
            u_traj[u_traj.len() - 1].t,
            cfg.t_end
        )));
    }
    check_tangent(h0, first)?;
    let scheme = Scheme::new(sys, cfg, first)?;
    let mut h = h0.values.clone();
    let mut out = Vec::new();
    let mut t = 0.0;
    for target in cfg.records() {
        let target = target.min(cfg.t_end);
        while t < target {
            let u = interpolate(u_traj, t);
            let data = scheme.prepare(&u)?;
            let (dt, reached) = clamp_step(t, target, scheme.dt(&data));
            let rate = scheme.tangent_rhs(&u, &data, &h);
            for (v, r) in h.iter_mut().zip(&rate) {
                *v += dt * r;
            }
            t = if reached { target } else { t + dt };
            if h.iter().any(|v| !v.is_finite()) {
                return Err(LabError::Instability { t });
            }
        }
        out.push(GridField {
            x0: h0.x0,
            dx: h0.dx,
            t,
            ncomp: h0.ncomp,
            values: h.clone(),
        });
    }
    Ok(out)
}
