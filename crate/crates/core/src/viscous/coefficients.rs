//! Coefficients of the equations satisfied by the gradient components
//! `v_i = l_i . u_x` and by the first variation `h`.
//!
//! Notation: `a . g` is the derivative of `g` in direction `a`, so
//! `r_j . r_i = Dr_i[r_j]`, `r_j . mu_i = Dmu_i[r_j]`, `(a . B) b = DB[a] b`
//! and `(a (x) b) : D^2B c = D^2B[a, b] c`. With these,
//!
//! ```text
//! p_ij  = -lambda_i (r_j.r_i - r_i.r_j)
//! q_ij  = 2 mu_i r_j.r_i + (mu_j - mu_i) r_i.r_j
//! s_ijk = 2 (r_j.mu_i) r_k.r_i + mu_i (r_k.(r_j.r_i) - (r_k.r_i).r_j) - (r_k.mu_j) r_j.r_i
//! ```
//!
//! and `v_i,t + (lambda_i v_i)_x - eps (mu_i v_i)_xx = phi_i` with
//!
//! ```text
//! phi_i = sum p^i_jk v_j v_k + eps (sum q^i_jk v_j,x v_k + sum s^i_jkl v_j v_k v_l),
//! ```
//!
//! where `p^i_jk = l_i . p_jk` and likewise for `q`, `s`. The coefficients
//! of the `h`-equation are kept as vectors in state space:
//!
//! ```text
//! phat_ij  = (lambda_j - lambda_i) r_j.r_i + (r_j.A) r_i - (r_i.A) r_j
//! qhat_ijk = -(r_k.mu_j) r_j.r_i - mu_j (r_k.r_j).r_i + 2 (r_k.mu_i) r_j.r_i
//!            + mu_i r_k.(r_j.r_i) + ((r_k.r_i).B) r_j - ((r_k.r_j).B) r_i
//!            + (r_i.B)(r_k.r_j) - (r_j.B)(r_k.r_i)
//!            + D^2B[r_j, r_i] r_k - D^2B[r_j, r_k] r_i
//! shat_ij  = 2 mu_i r_j.r_i + (r_i.B) r_j - (r_j.B) r_i
//! what_ij  = (mu_i - mu_j) r_j.r_i - (r_j.B) r_i + (r_i.B) r_j
//! ```
//!
//! Derivatives of frame quantities are central differences of frames
//! sign-aligned with the frame at `u`. Single derivatives use `fd_step`;
//! `r_k.(r_j.r_i)` differentiates a difference quotient and uses
//! `nested_step` at both levels, which keeps roundoff near
//! `eps_mach / nested_step^2`.

use nalgebra::{DMatrix, DVector};

use crate::error::{LabError, Result};
use crate::frame::{frame_fast, EigenFrame};
use crate::system::SystemSpec;

use super::linearized::matrix_derivative;

#[derive(Debug, Clone, PartialEq)]
pub struct SourceCoefficients {
    pub n: usize,
    pub u: Vec<f64>,
    /// `p[(i*n + j)*n + k] = l_i . p_jk`.
    pub p: Vec<f64>,
    /// `q[(i*n + j)*n + k] = l_i . q_jk`.
    pub q: Vec<f64>,
    /// `s[((i*n + j)*n + k)*n + l] = l_i . s_jkl`.
    pub s: Vec<f64>,
    /// `phat[i*n + j]` is the vector `phat_ij`.
    pub phat: Vec<DVector<f64>>,
    /// `qhat[(i*n + j)*n + k]` is the vector `qhat_ijk`.
    pub qhat: Vec<DVector<f64>>,
    pub shat: Vec<DVector<f64>>,
    pub what: Vec<DVector<f64>>,
}

impl SourceCoefficients {
    pub fn p(&self, i: usize, j: usize, k: usize) -> f64 {
        self.p[(i * self.n + j) * self.n + k]
    }

    pub fn q(&self, i: usize, j: usize, k: usize) -> f64 {
        self.q[(i * self.n + j) * self.n + k]
    }

    pub fn s(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.s[((i * self.n + j) * self.n + k) * self.n + l]
    }

    pub fn phat(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.phat[i * self.n + j]
    }

    pub fn qhat(&self, i: usize, j: usize, k: usize) -> &DVector<f64> {
        &self.qhat[(i * self.n + j) * self.n + k]
    }

    pub fn shat(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.shat[i * self.n + j]
    }

    pub fn what(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.what[i * self.n + j]
    }

    /// `phi_i` for gradient components `v`, their derivatives `vx` and
    /// viscosity `eps`.
    pub fn phi(&self, v: &[f64], vx: &[f64], eps: f64) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut quad = 0.0;
                let mut visc = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        quad += self.p(i, j, k) * v[j] * v[k];
                        visc += self.q(i, j, k) * vx[j] * v[k];
                        for l in 0..n {
                            visc += self.s(i, j, k, l) * v[j] * v[k] * v[l];
                        }
                    }
                }
                quad + eps * visc
            })
            .collect()
    }

    /// Right side of the `h`-equation as a state-space vector, for frame
    /// components `h`, `hx` of the variation and `v`, `vx` of the gradient.
    pub fn h_source(&self, h: &[f64], hx: &[f64], v: &[f64], vx: &[f64], eps: f64) -> DVector<f64> {
        let n = self.n;
        let mut hyper = DVector::zeros(n);
        let mut visc = DVector::zeros(n);
        for i in 0..n {
            for j in 0..n {
                hyper += self.phat(i, j) * (h[i] * v[j]);
                visc += self.shat(i, j) * (hx[i] * v[j]) + self.what(i, j) * (h[i] * vx[j]);
                for k in 0..n {
                    visc += self.qhat(i, j, k) * (h[i] * v[j] * v[k]);
                }
            }
        }
        hyper + visc * eps
    }

    /// Largest magnitude among the diagonal entries that vanish for
    /// straight characteristic fields.
    pub fn max_diagonal(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                worst = worst
                    .max(self.p(i, k, k).abs())
                    .max(self.q(i, k, k).abs())
                    .max(self.s(i, k, k, k).abs());
            }
            worst = worst
                .max(self.phat(k, k).amax())
                .max(self.qhat(k, k, k).amax())
                .max(self.shat(k, k).amax())
                .max(self.what(k, k).amax());
        }
        worst
    }
}

/// Frame derivatives along each eigendirection at one point.
struct FirstDerivatives {
    /// `dr[j][i] = r_j . r_i`.
    dr: Vec<Vec<DVector<f64>>>,
    /// `dmu[j][i] = r_j . mu_i`.
    dmu: Vec<Vec<f64>>,
}

fn shifted(u: &[f64], dir: &DVector<f64>, h: f64) -> Vec<f64> {
    u.iter().zip(dir.iter()).map(|(a, b)| a + h * b).collect()
}

fn aligned(sys: &SystemSpec, v: &[f64], base: &EigenFrame) -> Result<EigenFrame> {
    Ok(frame_fast(sys, v)?.align_with(base))
}

fn first_derivatives(sys: &SystemSpec, frame: &EigenFrame, base: &EigenFrame, h: f64) -> Result<FirstDerivatives> {
    let n = sys.n;
    let mut dr = Vec::with_capacity(n);
    let mut dmu = Vec::with_capacity(n);
    for j in 0..n {
        let rj = frame.r(j);
        let plus = aligned(sys, &shifted(&frame.u, &rj, h), base)?;
        let minus = aligned(sys, &shifted(&frame.u, &rj, -h), base)?;
        dr.push((0..n).map(|i| (plus.r(i) - minus.r(i)) / (2.0 * h)).collect());
        dmu.push((0..n).map(|i| (plus.mu[i] - minus.mu[i]) / (2.0 * h)).collect());
    }
    Ok(FirstDerivatives { dr, dmu })
}

/// `Dr_i[zeta]` for all `i`, linear in `zeta`.
fn frame_derivative_along(
    sys: &SystemSpec,
    base: &EigenFrame,
    zeta: &DVector<f64>,
    h: f64,
) -> Result<Vec<DVector<f64>>> {
    let n = sys.n;
    let norm = zeta.norm();
    if norm == 0.0 {
        return Ok(vec![DVector::zeros(n); n]);
    }
    let dir = zeta / norm;
    let plus = aligned(sys, &shifted(&base.u, &dir, h), base)?;
    let minus = aligned(sys, &shifted(&base.u, &dir, -h), base)?;
    Ok((0..n).map(|i| (plus.r(i) - minus.r(i)) * (norm / (2.0 * h))).collect())
}

/// `D^2B[a, b]` by the four-point mixed difference.
fn second_matrix_derivative(sys: &SystemSpec, u: &[f64], a: &DVector<f64>, b: &DVector<f64>, h: f64) -> DMatrix<f64> {
    let at = |sa: f64, sb: f64| {
        let v: Vec<f64> = (0..u.len()).map(|c| u[c] + h * (sa * a[c] + sb * b[c])).collect();
        sys.viscosity(&v)
    };
    (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h)
}

/// Coefficients with the system's default difference steps.
pub fn source_coefficients(sys: &SystemSpec, u: &[f64]) -> Result<SourceCoefficients> {
    source_coefficients_with_steps(sys, u, sys.tol.fd_step, sys.tol.nested_step)
}

pub fn source_coefficients_with_steps(
    sys: &SystemSpec,
    u: &[f64],
    fd_step: f64,
    nested_step: f64,
) -> Result<SourceCoefficients> {
    let n = sys.n;
    // Every stencil point lies within 2 * nested_step of u (unit directions).
    let reach = 2.0 * nested_step.max(fd_step) * (1.0 + 1e-9);
    for c in 0..n {
        let mut lo = u.to_vec();
        let mut hi = u.to_vec();
        lo[c] -= reach;
        hi[c] += reach;
        if !sys.domain.contains(&lo) || !sys.domain.contains(&hi) {
            return Err(LabError::OutOfDomain { state: u.to_vec() });
        }
    }
    let base = frame_fast(sys, u)?;
    let d1 = first_derivatives(sys, &base, &base, fd_step)?;
    let r: Vec<DVector<f64>> = (0..n).map(|i| base.r(i)).collect();
    let lam = &base.lambda;
    let mu = &base.mu;

    // nest[k][j][i] = r_k . (r_j . r_i), outer direction frozen at u.
    let h2 = nested_step;
    let mut nest = vec![vec![vec![DVector::zeros(n); n]; n]; n];
    for k in 0..n {
        let fp = aligned(sys, &shifted(u, &r[k], h2), &base)?;
        let fm = aligned(sys, &shifted(u, &r[k], -h2), &base)?;
        let dp = first_derivatives(sys, &fp, &base, h2)?;
        let dm = first_derivatives(sys, &fm, &base, h2)?;
        for j in 0..n {
            for i in 0..n {
                nest[k][j][i] = (&dp.dr[j][i] - &dm.dr[j][i]) / (2.0 * h2);
            }
        }
    }
    // dd[k][i][j] = (r_k . r_i) . r_j
    let mut dd = vec![vec![vec![DVector::zeros(n); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            let along = frame_derivative_along(sys, &base, &d1.dr[k][i], fd_step)?;
            dd[k][i].clone_from_slice(&along[..n]);
        }
    }
    let da: Vec<DMatrix<f64>> = (0..n)
        .map(|j| matrix_derivative(|v| sys.drift(v), u, r[j].as_slice(), fd_step))
        .collect();
    let db: Vec<DMatrix<f64>> = (0..n)
        .map(|j| matrix_derivative(|v| sys.viscosity(v), u, r[j].as_slice(), fd_step))
        .collect();
    let dr = &d1.dr;
    let dmu = &d1.dmu;

    let proj = |v: &DVector<f64>, i: usize| base.left.row(i).transpose().dot(v);

    let mut p = vec![0.0; n * n * n];
    let mut q = vec![0.0; n * n * n];
    let mut s = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            let pv = (&dr[b][a] - &dr[a][b]) * (-lam[a]);
            let qv = &dr[b][a] * (2.0 * mu[a]) + &dr[a][b] * (mu[b] - mu[a]);
            for m in 0..n {
                p[(m * n + a) * n + b] = proj(&pv, m);
                q[(m * n + a) * n + b] = proj(&qv, m);
            }
            for c in 0..n {
                // s_abc with (i, j, k) = (a, b, c)
                let sv =
                    &dr[c][a] * (2.0 * dmu[b][a]) + (&nest[c][b][a] - &dd[c][a][b]) * mu[a] - &dr[b][a] * dmu[c][b];
                for m in 0..n {
                    s[((m * n + a) * n + b) * n + c] = proj(&sv, m);
                }
            }
        }
    }

    let mut phat = Vec::with_capacity(n * n);
    let mut shat = Vec::with_capacity(n * n);
    let mut what = Vec::with_capacity(n * n);
    let mut qhat = Vec::with_capacity(n * n * n);
    let d2b: Vec<Vec<DMatrix<f64>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| second_matrix_derivative(sys, u, &r[a], &r[b], h2))
                .collect()
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            phat.push(&dr[j][i] * (lam[j] - lam[i]) + &da[j] * &r[i] - &da[i] * &r[j]);
            shat.push(&dr[j][i] * (2.0 * mu[i]) + &db[i] * &r[j] - &db[j] * &r[i]);
            what.push(&dr[j][i] * (mu[i] - mu[j]) - &db[j] * &r[i] + &db[i] * &r[j]);
            for k in 0..n {
                let db_ki = matrix_derivative(|v| sys.viscosity(v), u, dr[k][i].as_slice(), fd_step);
                let db_kj = matrix_derivative(|v| sys.viscosity(v), u, dr[k][j].as_slice(), fd_step);
                let v = &dr[j][i] * (2.0 * dmu[k][i] - dmu[k][j]) - &dd[k][j][i] * mu[j]
                    + &nest[k][j][i] * mu[i]
                    + db_ki * &r[j]
                    - db_kj * &r[i]
                    + &db[i] * &dr[k][j]
                    - &db[j] * &dr[k][i]
                    + &d2b[j][i] * &r[k]
                    - &d2b[j][k] * &r[i];
                qhat.push(v);
            }
        }
    }
    Ok(SourceCoefficients {
        n,
        u: u.to_vec(),
        p,
        q,
        s,
        phat,
        qhat,
        shat,
        what,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system;

    #[test]
    fn constant_coefficients_vanish() {
        let sys = system::advection();
        let c = source_coefficients(&sys, &[0.3]).unwrap();
        assert_eq!(c.max_diagonal(), 0.0);
        assert_eq!(c.phi(&[1.0], &[2.0], 0.1), vec![0.0]);
    }

    #[test]
    fn stencil_must_fit_in_the_box() {
        let sys = system::rotated2();
        assert!(matches!(
            source_coefficients(&sys, &[0.3999, 0.0]),
            Err(LabError::OutOfDomain { .. })
        ));
    }
}
