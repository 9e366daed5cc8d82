use nalgebra::{DMatrix, DVector};

use crate::error::{LabError, Result};
use crate::frame::{frame_fast, EigenFrame};
use crate::system::SystemSpec;

/// Largest RK4 step along a rarefaction curve.
pub const CURVE_STEP: f64 = 1e-2;
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
const SIGMA_FLOOR: f64 = 1e-14;

/// `r_i(u)`, sign-aligned with `reference`.
pub(crate) fn aligned_direction(
    sys: &SystemSpec,
    u: &[f64],
    i: usize,
    reference: &DVector<f64>,
) -> Result<DVector<f64>> {
    let r = frame_fast(sys, u)?.r(i);
    Ok(if r.dot(reference) < 0.0 { -r } else { r })
}

fn axpy(u: &DVector<f64>, h: f64, d: &DVector<f64>) -> DVector<f64> {
    u + d * h
}

/// One classical RK4 step of `dR/ds = r_i(R)`. Returns the new state and
/// the direction at it, both aligned with `dir`.
pub(crate) fn rk4_step(
    sys: &SystemSpec,
    i: usize,
    y: &DVector<f64>,
    dir: &DVector<f64>,
    h: f64,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let k1 = dir.clone();
    let k2 = aligned_direction(sys, axpy(y, 0.5 * h, &k1).as_slice(), i, &k1)?;
    let k3 = aligned_direction(sys, axpy(y, 0.5 * h, &k2).as_slice(), i, &k2)?;
    let k4 = aligned_direction(sys, axpy(y, h, &k3).as_slice(), i, &k3)?;
    let next = y + (&k1 + &k2 * 2.0 + &k3 * 2.0 + &k4) * (h / 6.0);
    let d = aligned_direction(sys, next.as_slice(), i, &k4)?;
    Ok((next, d))
}

/// `R_i(sigma; u_minus)` by RK4 with steps of at most [`CURVE_STEP`].
///
/// The curve is oriented by the frame at `u_minus`, so `sigma > 0` moves
/// along `r_i(u_minus)`.
pub fn rarefaction_curve(sys: &SystemSpec, i: usize, u_minus: &[f64], sigma: f64) -> Result<Vec<f64>> {
    rarefaction_curve_with_step(sys, i, u_minus, sigma, CURVE_STEP)
}

pub fn rarefaction_curve_with_step(
    sys: &SystemSpec,
    i: usize,
    u_minus: &[f64],
    sigma: f64,
    max_step: f64,
) -> Result<Vec<f64>> {
    let frame = frame_fast(sys, u_minus)?;
    if sigma == 0.0 {
        return Ok(u_minus.to_vec());
    }
    let steps = (sigma.abs() / max_step).ceil().max(1.0) as usize;
    let h = sigma / steps as f64;
    let mut y = DVector::from_column_slice(u_minus);
    let mut dir = frame.r(i);
    for _ in 0..steps {
        let (next, d) = rk4_step(sys, i, &y, &dir, h)?;
        y = next;
        dir = d;
    }
    Ok(y.as_slice().to_vec())
}

/// Wave strengths and intermediate states of a Riemann problem.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveDecomposition {
    pub sigma: Vec<f64>,
    /// `w[0] = u_l`, `w[n] = u_r` (the latter up to the Newton tolerance).
    pub w: Vec<Vec<f64>>,
    pub iterations: usize,
    pub residual: f64,
}

fn compose(sys: &SystemSpec, u_l: &[f64], sigma: &[f64]) -> Result<Vec<Vec<f64>>> {
    let mut w = vec![u_l.to_vec()];
    for (i, s) in sigma.iter().enumerate() {
        let next = rarefaction_curve(sys, i, &w[i], *s)?;
        w.push(next);
    }
    Ok(w)
}

fn residual_of(w: &[Vec<f64>], u_r: &[f64]) -> DVector<f64> {
    let last = &w[w.len() - 1];
    DVector::from_iterator(u_r.len(), last.iter().zip(u_r).map(|(a, b)| a - b))
}

/// Solves `R_n(sigma_n; ... R_1(sigma_1; u_l)) = u_r` by Newton's method
/// with a finite-difference Jacobian, starting from `sigma_i = l_i(u_l).du`
/// and halving the step while the residual grows.
pub fn wave_decomposition(sys: &SystemSpec, u_l: &[f64], u_r: &[f64]) -> Result<WaveDecomposition> {
    sys.check_in_domain(u_l)?;
    sys.check_in_domain(u_r)?;
    let n = sys.n;
    let frame: EigenFrame = frame_fast(sys, u_l)?;
    let du: Vec<f64> = u_r.iter().zip(u_l).map(|(a, b)| a - b).collect();
    let mut sigma: Vec<f64> = frame.project(&du).as_slice().to_vec();
    let mut w = compose(sys, u_l, &sigma)?;
    let mut res = residual_of(&w, u_r);
    let mut iterations = 0;
    let h = 1e-7;
    while res.norm() > NEWTON_TOL {
        if iterations == NEWTON_MAX_ITER {
            return Err(LabError::NoConvergence {
                residual: res.norm(),
                iterations,
            });
        }
        iterations += 1;
        let mut jac = DMatrix::zeros(n, n);
        for k in 0..n {
            let mut sp = sigma.clone();
            let mut sm = sigma.clone();
            sp[k] += h;
            sm[k] -= h;
            let wp = compose(sys, u_l, &sp)?;
            let wm = compose(sys, u_l, &sm)?;
            let col = (residual_of(&wp, u_r) - residual_of(&wm, u_r)) / (2.0 * h);
            jac.set_column(k, &col);
        }
        let delta = jac.lu().solve(&(-&res)).ok_or(LabError::NoConvergence {
            residual: res.norm(),
            iterations,
        })?;
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = sigma.iter().zip(delta.iter()).map(|(s, d)| s + t * d).collect();
            let attempt = compose(sys, u_l, &trial).map(|tw| {
                let r = residual_of(&tw, u_r);
                (tw, r)
            });
            match attempt {
                Ok((tw, r)) if r.norm() < res.norm() || t < 1e-6 => {
                    sigma = trial;
                    w = tw;
                    res = r;
                    break;
                }
                _ if t >= 1e-6 => t *= 0.5,
                Ok(_) => unreachable!(),
                Err(e) => return Err(e),
            }
        }
    }
    // strengths at rounding level are exactly zero, so that pure waves
    // report a single nontrivial family
    if sigma.iter().any(|s| *s != 0.0 && s.abs() < SIGMA_FLOOR) {
        for s in sigma.iter_mut().filter(|s| s.abs() < SIGMA_FLOOR) {
            *s = 0.0;
        }
        w = compose(sys, u_l, &sigma)?;
        res = residual_of(&w, u_r);
    }
    Ok(WaveDecomposition {
        sigma,
        w,
        iterations,
        residual: res.norm(),
    })
}
