use nalgebra::DVector;

use crate::error::{LabError, Result};
use crate::frame::frame_fast;
use crate::system::SystemSpec;

use super::curves::rk4_step;

pub const MIN_FLUX_NODES: usize = 256;

/// Local shape of a tabulated flux between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
    Linear,
}

/// `F_i(omega) = int_0^omega lambda_i(R_i(s; w_prev)) ds` tabulated on
/// `omega_k = k h`, `k = 0..=intervals`, with `h = sigma_max / intervals`
/// (so the nodes run from 0 towards `sigma_max`).
#[derive(Debug, Clone)]
pub struct ScalarFlux {
    pub family: usize,
    pub base: Vec<f64>,
    pub sigma_max: f64,
    pub h: f64,
    pub values: Vec<f64>,
    pub speeds: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `r_i` at each node, oriented so that `dR/domega = r`.
    pub directions: Vec<Vec<f64>>,
    pub convexity: Vec<Convexity>,
    /// Largest gap between a fourth-order difference of the table and the
    /// tabulated speed at interior nodes.
    pub derivative_error: f64,
}

impl ScalarFlux {
    pub fn nodes(&self) -> usize {
        self.values.len()
    }

    /// Node position; the last node is exactly `sigma_max`.
    pub fn omega(&self, k: usize) -> f64 {
        if k + 1 == self.nodes() {
            self.sigma_max
        } else {
            k as f64 * self.h
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.sigma_max == 0.0
    }

    fn locate(&self, omega: f64) -> (usize, f64) {
        let last = self.nodes() - 1;
        if last == 0 {
            return (0, 0.0);
        }
        let s = (omega / self.h).clamp(0.0, last as f64);
        let k = (s.floor() as usize).min(last - 1);
        (k, s - k as f64)
    }

    /// Cubic Hermite interpolation of `F` using the tabulated speeds.
    pub fn eval(&self, omega: f64) -> f64 {
        if self.nodes() == 1 {
            return 0.0;
        }
        let (k, s) = self.locate(omega);
        hermite(
            self.values[k],
            self.values[k + 1],
            self.speeds[k],
            self.speeds[k + 1],
            self.h,
            s,
        )
    }

    /// Derivative of the Hermite interpolant.
    pub fn speed(&self, omega: f64) -> f64 {
        if self.nodes() == 1 {
            return self.speeds[0];
        }
        let (k, s) = self.locate(omega);
        hermite_slope(
            self.values[k],
            self.values[k + 1],
            self.speeds[k],
            self.speeds[k + 1],
            self.h,
            s,
        )
    }

    /// `R_i(omega; w_prev)` by Hermite interpolation of the tabulated curve.
    pub fn state(&self, omega: f64) -> Vec<f64> {
        if self.nodes() == 1 {
            return self.base.clone();
        }
        let (k, s) = self.locate(omega);
        (0..self.base.len())
            .map(|c| {
                hermite(
                    self.states[k][c],
                    self.states[k + 1][c],
                    self.directions[k][c],
                    self.directions[k + 1][c],
                    self.h,
                    s,
                )
            })
            .collect()
    }
}

fn hermite(f0: f64, f1: f64, d0: f64, d1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * h * d0 + (-2.0 * s3 + 3.0 * s2) * f1 + (s3 - s2) * h * d1
}

fn hermite_slope(f0: f64, f1: f64, d0: f64, d1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    ((6.0 * s2 - 6.0 * s) * (f0 - f1)) / h + (3.0 * s2 - 4.0 * s + 1.0) * d0 + (3.0 * s2 - 2.0 * s) * d1
}

/// [`scalar_flux_with_nodes`] with [`MIN_FLUX_NODES`] nodes.
pub fn scalar_flux(sys: &SystemSpec, i: usize, w_prev: &[f64], sigma_max: f64) -> Result<ScalarFlux> {
    scalar_flux_with_nodes(sys, i, w_prev, sigma_max, MIN_FLUX_NODES)
}

/// Tabulates `F_i` by composite Simpson quadrature. The curve is advanced
/// with RK4 from node to node, and once more by half a step for the
/// Simpson midpoint.
pub fn scalar_flux_with_nodes(
    sys: &SystemSpec,
    i: usize,
    w_prev: &[f64],
    sigma_max: f64,
    nodes: usize,
) -> Result<ScalarFlux> {
    if i >= sys.n {
        return Err(LabError::Config(format!("family {} out of range", i + 1)));
    }
    if !sigma_max.is_finite() {
        return Err(LabError::DegenerateFlux("non-finite strength".into()));
    }
    let frame = frame_fast(sys, w_prev)?;
    let r0 = frame.r(i);
    if sigma_max == 0.0 {
        return Ok(ScalarFlux {
            family: i,
            base: w_prev.to_vec(),
            sigma_max,
            h: 0.0,
            values: vec![0.0],
            speeds: vec![frame.lambda[i]],
            states: vec![w_prev.to_vec()],
            directions: vec![r0.as_slice().to_vec()],
            convexity: Vec::new(),
            derivative_error: 0.0,
        });
    }
    let intervals = nodes.max(MIN_FLUX_NODES) - 1;
    let h = sigma_max / intervals as f64;
    let lambda_of = |u: &DVector<f64>| -> Result<f64> { Ok(frame_fast(sys, u.as_slice())?.lambda[i]) };
    let mut y = DVector::from_column_slice(w_prev);
    let mut dir = r0;
    let mut values = vec![0.0];
    let mut speeds = vec![frame.lambda[i]];
    let mut states = vec![w_prev.to_vec()];
    let mut directions = vec![dir.as_slice().to_vec()];
    for _ in 0..intervals {
        let (mid, _) = rk4_step(sys, i, &y, &dir, 0.5 * h)?;
        let (next, next_dir) = rk4_step(sys, i, &y, &dir, h)?;
        let lm = lambda_of(&mid)?;
        let ln = lambda_of(&next)?;
        let lk = *speeds.last().unwrap();
        let f = values.last().unwrap() + h / 6.0 * (lk + 4.0 * lm + ln);
        values.push(f);
        speeds.push(ln);
        states.push(next.as_slice().to_vec());
        directions.push(next_dir.as_slice().to_vec());
        y = next;
        dir = next_dir;
    }
    let scale = speeds.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let convexity = (0..intervals)
        .map(|k| {
            // F'' has the sign of the speed increment taken in increasing omega
            let signed = (speeds[k + 1] - speeds[k]) * h.signum();
            if signed.abs() <= 1e-12 * scale {
                Convexity::Linear
            } else if signed > 0.0 {
                Convexity::Convex
            } else {
                Convexity::Concave
            }
        })
        .collect();
    let mut derivative_error: f64 = 0.0;
    for k in 2..intervals.saturating_sub(1) {
        let d = (-values[k + 2] + 8.0 * values[k + 1] - 8.0 * values[k - 1] + values[k - 2]) / (12.0 * h);
        derivative_error = derivative_error.max((d - speeds[k]).abs());
    }
    if values.iter().chain(&speeds).any(|v| !v.is_finite()) {
        return Err(LabError::DegenerateFlux("non-finite tabulated flux".into()));
    }
    Ok(ScalarFlux {
        family: i,
        base: w_prev.to_vec(),
        sigma_max,
        h,
        values,
        speeds,
        states,
        directions,
        convexity,
        derivative_error,
    })
}
