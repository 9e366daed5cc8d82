use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::system::SystemSpec;

use super::fan::{solve_riemann, RiemannFan};

/// Piecewise-constant data: `states[k]` on `(breaks[k-1], breaks[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    pub breaks: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl PiecewiseConstant {
    pub fn new(breaks: Vec<f64>, states: Vec<Vec<f64>>) -> Result<Self> {
        if states.len() != breaks.len() + 1 {
            return Err(LabError::Config(format!(
                "{} breaks need {} states, got {}",
                breaks.len(),
                breaks.len() + 1,
                states.len()
            )));
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(LabError::Config("breaks must be finite and strictly increasing".into()));
        }
        Ok(PiecewiseConstant { breaks, states })
    }

    pub fn eval(&self, x: f64) -> &[f64] {
        &self.states[self.breaks.partition_point(|b| *b <= x)]
    }
}

/// Riemann fans at every jump, valid until neighbouring fans meet.
#[derive(Debug, Clone)]
pub struct GluedEvolution {
    pub pieces: PiecewiseConstant,
    /// Jumps with distinct states, each with its fan.
    pub jumps: Vec<(f64, RiemannFan)>,
    /// First time at which two neighbouring fans can touch.
    pub horizon: f64,
}

/// Solves one Riemann problem per jump and computes the safe horizon
/// `min (b_{k+1} - b_k) / (s_max(k) - s_min(k+1))` over neighbouring fans.
pub fn glued_evolution(sys: &SystemSpec, pieces: PiecewiseConstant) -> Result<GluedEvolution> {
    let mut jumps = Vec::new();
    for (k, b) in pieces.breaks.iter().enumerate() {
        let (l, r) = (&pieces.states[k], &pieces.states[k + 1]);
        if l != r {
            jumps.push((*b, solve_riemann(sys, l, r)?));
        }
    }
    let mut horizon = f64::INFINITY;
    for pair in jumps.windows(2) {
        let (b0, f0) = &pair[0];
        let (b1, f1) = &pair[1];
        let (Some((_, hi)), Some((lo, _))) = (f0.active_range(), f1.active_range()) else {
            continue;
        };
        if hi > lo {
            horizon = horizon.min((b1 - b0) / (hi - lo));
        }
    }
    Ok(GluedEvolution { pieces, jumps, horizon })
}

impl GluedEvolution {
    /// `u(t, x)`; errors once `t` passes the horizon.
    pub fn sample(&self, t: f64, x: f64) -> Result<Vec<f64>> {
        if t < 0.0 {
            return Err(LabError::Config("negative time".into()));
        }
        if t > self.horizon {
            return Err(LabError::InteractionReached {
                t,
                horizon: self.horizon,
            });
        }
        if t == 0.0 {
            return Ok(self.pieces.eval(x).to_vec());
        }
        // cones are disjoint and ordered before the horizon
        let k = self.jumps.partition_point(|(b, f)| {
            let lo = f.active_range().map_or(0.0, |r| r.0);
            b + lo * t <= x
        });
        if k > 0 {
            let (b, fan) = &self.jumps[k - 1];
            let hi = fan.active_range().map_or(0.0, |r| r.1);
            if x <= b + hi * t {
                return Ok(fan.sample(t, x - b));
            }
            return Ok(fan.u_r.clone());
        }
        Ok(self.pieces.states[0].clone())
    }

    pub fn to_grid(&self, t: f64, like: &GridField) -> Result<GridField> {
        let mut values = Vec::with_capacity(like.values.len());
        for j in 0..like.len() {
            values.extend(self.sample(t, like.x(j))?);
        }
        Ok(GridField {
            x0: like.x0,
            dx: like.dx,
            t,
            ncomp: self.pieces.states[0].len(),
            values,
        })
    }
}
