//! Explicit method-of-lines solver.
//!
//! Diffusion is always in flux form: across the interface `k + 1/2` with
//! midpoint `m = (u_k + u_{k+1})/2` the diffusive flux is
//! `eps B(m) (u_{k+1} - u_k) / dx`. Convection is either conservative with
//! characteristic-wise local Lax-Friedrichs dissipation (`Convection::Flux`)
//!
//! ```text
//! F = (f_k + f_{k+1})/2 - 1/2 sum_i alpha_i (l_i(m) . du) r_i(m),
//! alpha_i = max(|lambda_i(u_k)|, |lambda_i(m)|, |lambda_i(u_{k+1})|)
//! ```
//!
//! or node-wise characteristic upwinding of `A(u) u_x`
//! (`Convection::Characteristic`). Forward Euler in time with
//! `dt = cfl * min(dx / max|lambda|, dx^2 / (2 eps max mu))`.

use crate::error::{LabError, Result};
use crate::frame::frame_fast;
use crate::grid::GridField;
use crate::system::{ScalarLaw, SystemSpec};

use super::config::{Boundary, Convection, SolveConfig};

/// Largest system size served by the stack-buffer constant-frame path.
const FAST_MAX: usize = 8;

/// Flattened constant frame: unit eigenvectors and the raw basis, all
/// row-major `n x n`.
struct FastFrame {
    n: usize,
    basis: Vec<f64>,
    inverse: Vec<f64>,
    right: Vec<f64>,
    left: Vec<f64>,
    laws: Vec<ScalarLaw>,
}

impl FastFrame {
    fn new(sys: &SystemSpec) -> Option<Self> {
        let cf = sys.constant_frame.as_ref()?;
        let n = sys.n;
        if n > FAST_MAX {
            return None;
        }
        let mut right = vec![0.0; n * n];
        let mut left = vec![0.0; n * n];
        for i in 0..n {
            let col = cf.basis.column(i);
            let k = col.iamax();
            let scale = if col[k] < 0.0 { -col.norm() } else { col.norm() };
            for c in 0..n {
                right[c * n + i] = cf.basis[(c, i)] / scale;
                left[i * n + c] = cf.inverse[(i, c)] * scale;
            }
        }
        let flat = |m: &nalgebra::DMatrix<f64>| (0..n * n).map(|k| m[(k / n, k % n)]).collect();
        Some(FastFrame {
            n,
            basis: flat(&cf.basis),
            inverse: flat(&cf.inverse),
            right,
            left,
            laws: cf.laws.clone(),
        })
    }

    fn characteristic(&self, u: &[f64]) -> [f64; FAST_MAX] {
        let n = self.n;
        let mut w = [0.0; FAST_MAX];
        for i in 0..n {
            w[i] = (0..n).map(|c| self.inverse[i * n + c] * u[c]).sum();
        }
        w
    }

    /// `R diag(d) R^-1` into `out`.
    fn diag_map(&self, d: &[f64], out: &mut [f64]) {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = (0..n)
                    .map(|i| self.basis[a * n + i] * d[i] * self.inverse[i * n + b])
                    .sum();
            }
        }
    }
}

/// Point data on a set of states, flattened. For entry `k`: `lambda` and
/// `mu` at `k * n + i`, `left` row `i` at `(k * n + i) * n`, `right`
/// component `c` of `r_i` at `(k * n + c) * n + i`, `visc` and `flux` as
/// row-major blocks.
#[derive(Default)]
pub(crate) struct PointData {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub visc: Vec<f64>,
    pub flux: Vec<f64>,
}

pub(crate) struct Scheme<'a> {
    pub sys: &'a SystemSpec,
    pub cfg: &'a SolveConfig,
    pub dx: f64,
    pub nodes: usize,
    pub flux_form: bool,
    fast: Option<FastFrame>,
}

/// Per-step data shared by the state and the tangent updates.
pub(crate) struct StepData {
    pub node: PointData,
    /// Interface midpoints; entry `k` sits between `k` and `k + 1` (and
    /// between `N - 1` and `0` in the periodic case).
    pub mid: PointData,
    pub mid_state: Vec<f64>,
    pub max_speed: f64,
    pub max_mu: f64,
}

impl<'a> Scheme<'a> {
    pub fn new(sys: &'a SystemSpec, cfg: &'a SolveConfig, u0: &GridField) -> Result<Self> {
        cfg.validate()?;
        if u0.ncomp != sys.n {
            return Err(LabError::GridMismatch(format!(
                "field has {} components, system has {}",
                u0.ncomp, sys.n
            )));
        }
        if u0.len() < 3 {
            return Err(LabError::Config("grid needs at least three nodes".into()));
        }
        let flux_form = match cfg.convection {
            Convection::Auto => sys.has_flux(),
            Convection::Flux => {
                if !sys.has_flux() {
                    return Err(LabError::Config(format!(
                        "system '{}' has no flux; flux convection unavailable",
                        sys.name
                    )));
                }
                true
            }
            Convection::Characteristic => false,
        };
        for j in 0..u0.len() {
            if !sys.domain.contains(u0.at(j)) {
                return Err(LabError::OutOfDomain {
                    state: u0.at(j).to_vec(),
                });
            }
        }
        Ok(Scheme {
            sys,
            cfg,
            dx: u0.dx,
            nodes: u0.len(),
            flux_form,
            fast: FastFrame::new(sys),
        })
    }

    pub fn interfaces(&self) -> usize {
        match self.cfg.boundary {
            Boundary::ConstantExtension => self.nodes - 1,
            Boundary::Periodic => self.nodes,
        }
    }

    pub fn right_of(&self, k: usize) -> usize {
        (k + 1) % self.nodes
    }

    /// Appends the frame of `u` (and `B(u)`, `f(u)` when asked) to `out`.
    fn push_point(&self, u: &[f64], visc: bool, flux: bool, out: &mut PointData) -> Result<()> {
        let n = self.sys.n;
        if let Some(ff) = &self.fast {
            self.sys.check_in_domain(u)?;
            let w = ff.characteristic(u);
            let mut lambda = [0.0; FAST_MAX];
            for i in 0..n {
                lambda[i] = (ff.laws[i].speed)(w[i]);
            }
            if lambda[..n].windows(2).all(|p| p[1] - p[0] >= self.sys.tol.gap_min) {
                let mut mu = [0.0; FAST_MAX];
                for i in 0..n {
                    mu[i] = (ff.laws[i].viscosity)(w[i]);
                    if !(mu[i] >= self.sys.c0 * (1.0 - 1e-12)) {
                        return Err(LabError::ViscosityBound {
                            state: u.to_vec(),
                            mu: mu[i],
                            c0: self.sys.c0,
                        });
                    }
                }
                out.lambda.extend_from_slice(&lambda[..n]);
                out.mu.extend_from_slice(&mu[..n]);
                out.left.extend_from_slice(&ff.left);
                out.right.extend_from_slice(&ff.right);
                if visc {
                    let at = out.visc.len();
                    out.visc.resize(at + n * n, 0.0);
                    ff.diag_map(&mu[..n], &mut out.visc[at..]);
                }
                if flux {
                    for a in 0..n {
                        let g: f64 = (0..n).map(|i| ff.basis[a * n + i] * (ff.laws[i].flux)(w[i])).sum();
                        out.flux.push(g);
                    }
                }
                return Ok(());
            }
        }
        let f = frame_fast(self.sys, u)?;
        out.lambda.extend_from_slice(&f.lambda);
        out.mu.extend_from_slice(&f.mu);
        for i in 0..n {
            out.left.extend((0..n).map(|c| f.left[(i, c)]));
        }
        for c in 0..n {
            out.right.extend((0..n).map(|i| f.right[(c, i)]));
        }
        if visc {
            let b = self.sys.viscosity(u);
            for a in 0..n {
                out.visc.extend((0..n).map(|c| b[(a, c)]));
            }
        }
        if flux {
            out.flux.extend(self.sys.flux(u).expect("flux present").iter());
        }
        Ok(())
    }

    /// `A(u)` row-major, from the node data when the frame is constant.
    pub fn drift_flat(&self, u: &[f64], lambda: &[f64]) -> Vec<f64> {
        let n = self.sys.n;
        let mut out = vec![0.0; n * n];
        match &self.fast {
            Some(ff) => ff.diag_map(lambda, &mut out),
            None => {
                let a = self.sys.drift(u);
                for k in 0..n * n {
                    out[k] = a[(k / n, k % n)];
                }
            }
        }
        out
    }

    /// `B(u)` row-major without domain checks.
    pub fn viscosity_flat(&self, u: &[f64]) -> Vec<f64> {
        let n = self.sys.n;
        let mut out = vec![0.0; n * n];
        match &self.fast {
            Some(ff) => {
                let w = ff.characteristic(u);
                let mu: Vec<f64> = (0..n).map(|i| (ff.laws[i].viscosity)(w[i])).collect();
                ff.diag_map(&mu, &mut out);
            }
            None => {
                let b = self.sys.viscosity(u);
                for k in 0..n * n {
                    out[k] = b[(k / n, k % n)];
                }
            }
        }
        out
    }

    pub fn prepare(&self, u: &[f64]) -> Result<StepData> {
        let n = self.sys.n;
        let mut node = PointData::default();
        for j in 0..self.nodes {
            self.push_point(&u[j * n..(j + 1) * n], false, self.flux_form, &mut node)?;
        }
        let mut mid = PointData::default();
        let mut mid_state = Vec::with_capacity(self.interfaces() * n);
        let visc = self.cfg.epsilon > 0.0;
        let mut m = vec![0.0; n];
        for k in 0..self.interfaces() {
            let r = self.right_of(k);
            for c in 0..n {
                m[c] = 0.5 * (u[k * n + c] + u[r * n + c]);
            }
            self.push_point(&m, visc, false, &mut mid)?;
            mid_state.extend_from_slice(&m);
        }
        let max_speed = node
            .lambda
            .iter()
            .chain(&mid.lambda)
            .fold(0.0f64, |a, l| a.max(l.abs()));
        let max_mu = node.mu.iter().chain(&mid.mu).fold(0.0f64, |a, m| a.max(*m));
        Ok(StepData {
            node,
            mid,
            mid_state,
            max_speed,
            max_mu,
        })
    }

    pub fn dt(&self, data: &StepData) -> f64 {
        match self.cfg.fixed_dt {
            Some(dt) => dt,
            None => stable_dt(self.dx, self.cfg.epsilon, self.cfg.cfl, data.max_speed, data.max_mu),
        }
    }

    /// Subtracts `1/2 sum_i alpha_i (l_i . d) r_i` of interface `k` from `g`.
    pub fn dissipate(&self, data: &StepData, k: usize, d: &[f64], g: &mut [f64]) {
        let n = self.sys.n;
        let r = self.right_of(k);
        for i in 0..n {
            let alpha = data.node.lambda[k * n + i]
                .abs()
                .max(data.mid.lambda[k * n + i].abs())
                .max(data.node.lambda[r * n + i].abs());
            let row = &data.mid.left[(k * n + i) * n..(k * n + i + 1) * n];
            let coeff: f64 = row.iter().zip(d).map(|(a, b)| a * b).sum();
            let s = 0.5 * alpha * coeff;
            for c in 0..n {
                g[c] -= data.mid.right[(k * n + c) * n + i] * s;
            }
        }
    }

    /// Turns interface fluxes and the two end fluxes into `-(F_right - F_left) / dx`.
    pub fn divergence(&self, fluxes: &[f64], ends: Option<(&[f64], &[f64])>, out: &mut [f64]) {
        let n = self.sys.n;
        let dx = self.dx;
        let zero = vec![0.0; n];
        for j in 0..self.nodes {
            let (right, left): (&[f64], &[f64]) = match self.cfg.boundary {
                Boundary::Periodic => {
                    let l = (j + self.nodes - 1) % self.nodes;
                    (&fluxes[j * n..(j + 1) * n], &fluxes[l * n..(l + 1) * n])
                }
                Boundary::ConstantExtension => {
                    let right = if j + 1 < self.nodes {
                        &fluxes[j * n..(j + 1) * n]
                    } else {
                        ends.map_or(&zero[..], |e| e.1)
                    };
                    let left = if j > 0 {
                        &fluxes[(j - 1) * n..j * n]
                    } else {
                        ends.map_or(&zero[..], |e| e.0)
                    };
                    (right, left)
                }
            };
            for c in 0..n {
                out[j * n + c] = -(right[c] - left[c]) / dx;
            }
        }
    }

    /// Time derivative of the state.
    pub fn rhs(&self, u: &[f64], data: &StepData) -> Vec<f64> {
        let n = self.sys.n;
        let scale = self.cfg.epsilon / self.dx;
        let diffuse = self.cfg.epsilon > 0.0;
        let mut fluxes = vec![0.0; self.interfaces() * n];
        let mut du = vec![0.0; n];
        for k in 0..self.interfaces() {
            let r = self.right_of(k);
            for c in 0..n {
                du[c] = u[r * n + c] - u[k * n + c];
            }
            let g = &mut fluxes[k * n..(k + 1) * n];
            if self.flux_form {
                for c in 0..n {
                    g[c] = 0.5 * (data.node.flux[k * n + c] + data.node.flux[r * n + c]);
                }
                self.dissipate(data, k, &du, g);
            }
            if diffuse {
                let b = &data.mid.visc[k * n * n..(k + 1) * n * n];
                for a in 0..n {
                    let bd: f64 = (0..n).map(|c| b[a * n + c] * du[c]).sum();
                    g[a] -= bd * scale;
                }
            }
        }
        let mut out = vec![0.0; u.len()];
        let last = self.nodes - 1;
        let ends = self
            .flux_form
            .then(|| (&data.node.flux[..n], &data.node.flux[last * n..]));
        self.divergence(&fluxes, ends, &mut out);
        if !self.flux_form {
            let mut conv = vec![0.0; n];
            for j in 0..self.nodes {
                self.upwind_convection(j, data, u, &mut conv);
                for c in 0..n {
                    out[j * n + c] -= conv[c];
                }
            }
        }
        out
    }

    pub fn neighbours(&self, j: usize) -> (usize, usize) {
        match self.cfg.boundary {
            Boundary::Periodic => ((j + self.nodes - 1) % self.nodes, (j + 1) % self.nodes),
            Boundary::ConstantExtension => (j.saturating_sub(1), (j + 1).min(self.nodes - 1)),
        }
    }

    /// `sum_i lambda_i r_i (l_i . D_i w) / dx` with one-sided differences
    /// `D_i` chosen by the sign of `lambda_i` at node `j`; frame from the
    /// node data, differences of the field `w`.
    pub fn upwind_convection(&self, j: usize, data: &StepData, w: &[f64], conv: &mut [f64]) {
        let n = self.sys.n;
        let (jl, jr) = self.neighbours(j);
        conv.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let lam = data.node.lambda[j * n + i];
            let (a, b) = if lam > 0.0 { (j, jl) } else { (jr, j) };
            let row = &data.node.left[(j * n + i) * n..(j * n + i + 1) * n];
            let coeff: f64 = (0..n).map(|c| row[c] * (w[a * n + c] - w[b * n + c])).sum();
            let s = lam * coeff / self.dx;
            for c in 0..n {
                conv[c] += data.node.right[(j * n + c) * n + i] * s;
            }
        }
    }

    pub fn check_state(&self, u: &[f64], t: f64, x0: f64) -> Result<()> {
        let n = self.sys.n;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(LabError::Instability { t });
        }
        for j in 0..self.nodes {
            if !self.sys.domain.contains(&u[j * n..(j + 1) * n]) {
                return Err(LabError::DomainExit {
                    t,
                    x: x0 + j as f64 * self.dx,
                });
            }
        }
        Ok(())
    }
}

/// `cfl * min(dx / max_speed, dx^2 / (2 eps max_mu))`; infinite when both
/// constraints are void.
pub fn stable_dt(dx: f64, epsilon: f64, cfl: f64, max_speed: f64, max_mu: f64) -> f64 {
    let conv = if max_speed > 0.0 { dx / max_speed } else { f64::INFINITY };
    let diff = if epsilon > 0.0 && max_mu > 0.0 {
        dx * dx / (2.0 * epsilon * max_mu)
    } else {
        f64::INFINITY
    };
    cfl * conv.min(diff)
}

/// Step actually taken towards `target` from `t`: the CFL step, or the
/// remainder when that would overshoot or leave a sliver. The flag tells
/// whether `target` is reached.
pub(crate) fn clamp_step(t: f64, target: f64, dt: f64) -> (f64, bool) {
    let remaining = target - t;
    if !dt.is_finite() || dt >= remaining || remaining - dt < 1e-9 * dt {
        (remaining, true)
    } else {
        (dt, false)
    }
}

/// Solves `u_t + A(u) u_x = eps (B(u) u_x)_x` and returns the state at each
/// record time.
pub fn solve_viscous(sys: &SystemSpec, u0: &GridField, cfg: &SolveConfig) -> Result<Vec<GridField>> {
    let scheme = Scheme::new(sys, cfg, u0)?;
    let mut u = u0.values.clone();
    let mut data = scheme.prepare(&u)?;
    let mut out = Vec::new();
    let mut t = 0.0;
    for target in cfg.records() {
        let target = target.min(cfg.t_end);
        while t < target {
            let (dt, reached) = clamp_step(t, target, scheme.dt(&data));
            let rate = scheme.rhs(&u, &data);
            for (v, r) in u.iter_mut().zip(&rate) {
                *v += dt * r;
            }
            t = if reached { target } else { t + dt };
            scheme.check_state(&u, t, u0.x0)?;
            data = scheme.prepare(&u)?;
        }
        out.push(GridField {
            x0: u0.x0,
            dx: u0.dx,
            t,
            ncomp: u0.ncomp,
            values: u.clone(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system;

    #[test]
    fn constant_data_is_a_fixed_point() {
        let sys = system::rotated2();
        let u0 = GridField::from_fn(-1.0, 1.0, 101, 2, |_| vec![0.1, -0.2]).unwrap();
        let cfg = SolveConfig::new(0.05, 0.2).with_records(vec![0.0, 0.1, 0.2]);
        let out = solve_viscous(&sys, &u0, &cfg).unwrap();
        assert_eq!(out.len(), 3);
        for f in &out {
            for j in 0..f.len() {
                assert!((f.at(j)[0] - 0.1).abs() < 1e-15 && (f.at(j)[1] + 0.2).abs() < 1e-15);
            }
        }
        assert_eq!(out[2].t, 0.2);
    }

    #[test]
    fn record_times_are_hit_exactly() {
        let sys = system::burgers();
        let u0 = GridField::from_fn(-1.0, 1.0, 51, 1, |x| vec![0.2 * (-x * x * 10.0).exp()]).unwrap();
        let cfg = SolveConfig::new(0.1, 0.3).with_records(vec![0.0, 0.0123, 0.3]);
        let out = solve_viscous(&sys, &u0, &cfg).unwrap();
        assert_eq!(out.iter().map(|f| f.t).collect::<Vec<_>>(), vec![0.0, 0.0123, 0.3]);
        assert_eq!(out[0].values, u0.values);
    }

    #[test]
    fn leaving_the_box_is_reported() {
        let sys = system::heat();
        let u0 = GridField::from_fn(-1.0, 1.0, 41, 1, |_| vec![9.99]).unwrap();
        let bad = GridField::from_fn(-1.0, 1.0, 41, 1, |_| vec![10.5]).unwrap();
        assert!(solve_viscous(&sys, &u0, &SolveConfig::new(0.1, 0.1)).is_ok());
        assert!(matches!(
            solve_viscous(&sys, &bad, &SolveConfig::new(0.1, 0.1)),
            Err(LabError::OutOfDomain { .. })
        ));
        let adv = system::advection();
        let blow = SolveConfig::new(0.0, 0.5).with_fixed_dt(0.2);
        let u1 = GridField::from_fn(-1.0, 1.0, 41, 1, |x| vec![if x < 0.0 { 1.0 } else { 0.0 }]).unwrap();
        let err = solve_viscous(&adv, &u1, &blow).unwrap_err();
        assert!(matches!(
            err,
            LabError::DomainExit { .. } | LabError::Instability { .. }
        ));
    }
}
