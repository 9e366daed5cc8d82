//! Front tracking for scalar conservation laws with piecewise-linear flux.
//!
//! States are restricted to a uniform grid of breakpoints `omega_k` and the
//! flux is replaced by its linear interpolant there. Riemann problems then
//! have piecewise-constant solutions made of finitely many fronts, and every
//! collision of two fronts is again such a Riemann problem.

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::system::SystemSpec;

use super::scalar::lower_envelope;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontTrackingOptions {
    /// Number of flux intervals between the smallest and largest data value.
    pub resolution: usize,
    /// Largest admissible number of simultaneous fronts.
    pub budget: usize,
    /// Largest admissible number of interactions.
    pub max_interactions: usize,
}

impl Default for FrontTrackingOptions {
    fn default() -> Self {
        FrontTrackingOptions {
            resolution: 2048,
            budget: 200_000,
            max_interactions: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Front {
    /// Position is `c + speed * t`.
    c: f64,
    speed: f64,
    left: usize,
    right: usize,
}

impl Front {
    fn at(&self, t: f64) -> f64 {
        self.c + self.speed * t
    }
}

/// Piecewise-constant scalar solution produced by front tracking.
#[derive(Debug, Clone)]
pub struct FrontSolution {
    pub t: f64,
    pub omega_min: f64,
    pub delta: f64,
    pub interactions: usize,
    pub max_fronts: usize,
    leftmost: usize,
    fronts: Vec<Front>,
}

impl FrontSolution {
    pub fn front_count(&self) -> usize {
        self.fronts.len()
    }

    pub fn front_positions(&self) -> Vec<f64> {
        self.fronts.iter().map(|f| f.at(self.t)).collect()
    }

    fn value(&self, k: usize) -> f64 {
        self.omega_min + k as f64 * self.delta
    }

    /// Right-continuous value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.fronts.partition_point(|f| f.at(self.t) <= x);
        if idx == 0 {
            self.value(self.leftmost)
        } else {
            self.value(self.fronts[idx - 1].right)
        }
    }
}

struct Tracker<'a> {
    flux: &'a [f64],
    omega_min: f64,
    delta: f64,
}

impl Tracker<'_> {
    fn omega(&self, k: usize) -> f64 {
        self.omega_min + k as f64 * self.delta
    }

    /// Fronts of the Riemann problem `left | right` issued from `(t, x)`,
    /// in order of increasing speed.
    fn riemann(&self, left: usize, right: usize, t: f64, x: f64) -> Vec<Front> {
        if left == right {
            return Vec::new();
        }
        let (idx, sign): (Vec<usize>, f64) = if left < right {
            ((left..=right).collect(), 1.0)
        } else {
            ((right..=left).rev().collect(), -1.0)
        };
        let pts: Vec<(f64, f64)> = idx
            .iter()
            .map(|&k| (sign * self.omega(k), sign * self.flux[k]))
            .collect();
        lower_envelope(&pts)
            .windows(2)
            .map(|e| {
                let (a, b) = (idx[e[0]], idx[e[1]]);
                let speed = (self.flux[b] - self.flux[a]) / (self.omega(b) - self.omega(a));
                Front {
                    c: x - speed * t,
                    speed,
                    left: a,
                    right: b,
                }
            })
            .collect()
    }
}

fn collision(a: &Front, b: &Front, now: f64) -> f64 {
    if a.speed > b.speed {
        ((b.c - a.c) / (a.speed - b.speed)).max(now)
    } else {
        f64::INFINITY
    }
}

/// Entropy solution at time `t` of `w_t + F(w)_x = 0` with
/// piecewise-constant data `values[k]` on `(breaks[k-1], breaks[k])`.
pub fn front_tracking_scalar(
    flux: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    values: &[f64],
    t: f64,
    opts: &FrontTrackingOptions,
) -> Result<FrontSolution> {
    if values.len() != breaks.len() + 1 {
        return Err(LabError::Config(
            "piecewise data needs one more value than breaks".into(),
        ));
    }
    if !(t >= 0.0) || opts.resolution == 0 {
        return Err(LabError::Config(
            "front tracking needs t >= 0 and a positive resolution".into(),
        ));
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(LabError::Config("non-finite data".into()));
    }
    let m = if hi > lo { opts.resolution } else { 1 };
    let delta = if hi > lo { (hi - lo) / m as f64 } else { 1.0 };
    let table: Vec<f64> = (0..=m).map(|k| flux(lo + k as f64 * delta)).collect();
    let tracker = Tracker {
        flux: &table,
        omega_min: lo,
        delta,
    };
    let snap = |v: f64| (((v - lo) / delta).round() as usize).min(m);
    let states: Vec<usize> = values.iter().map(|v| snap(*v)).collect();
    let mut fronts: Vec<Front> = Vec::new();
    for (k, b) in breaks.iter().enumerate() {
        fronts.extend(tracker.riemann(states[k], states[k + 1], 0.0, *b));
    }
    if fronts.len() > opts.budget {
        return Err(LabError::FrontBudgetExceeded { budget: opts.budget });
    }
    let mut hits: Vec<f64> = fronts.windows(2).map(|p| collision(&p[0], &p[1], 0.0)).collect();
    let mut interactions = 0;
    let mut max_fronts = fronts.len();
    while let Some((k, tc)) = hits
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, v)| (k, *v))
    {
        if tc > t {
            break;
        }
        interactions += 1;
        if interactions > opts.max_interactions {
            return Err(LabError::FrontBudgetExceeded { budget: opts.budget });
        }
        let x = fronts[k].at(tc);
        let new = tracker.riemann(fronts[k].left, fronts[k + 1].right, tc, x);
        fronts.splice(k..k + 2, new);
        max_fronts = max_fronts.max(fronts.len());
        if fronts.len() > opts.budget {
            return Err(LabError::FrontBudgetExceeded { budget: opts.budget });
        }
        hits = fronts.windows(2).map(|p| collision(&p[0], &p[1], tc)).collect();
    }
    Ok(FrontSolution {
        t,
        omega_min: lo,
        delta,
        interactions,
        max_fronts,
        leftmost: states[0],
        fronts,
    })
}

/// Exact semigroup of a constant-frame system: each characteristic
/// component `w_i = (R^-1 u)_i` is evolved by front tracking of its scalar
/// law, node values being read as cell averages between midpoints.
pub fn exact_semigroup_decoupled(sys: &SystemSpec, u0: &GridField, t: f64) -> Result<GridField> {
    exact_semigroup_decoupled_with(sys, u0, t, &FrontTrackingOptions::default())
}

pub fn exact_semigroup_decoupled_with(
    sys: &SystemSpec,
    u0: &GridField,
    t: f64,
    opts: &FrontTrackingOptions,
) -> Result<GridField> {
    let frame = sys
        .constant_frame
        .as_ref()
        .ok_or_else(|| LabError::NoReference(format!("system {} has no constant frame", sys.name)))?;
    if u0.ncomp != sys.n {
        return Err(LabError::GridMismatch(format!(
            "expected {} components, got {}",
            sys.n, u0.ncomp
        )));
    }
    let len = u0.len();
    let breaks: Vec<f64> = (0..len.saturating_sub(1)).map(|j| u0.x(j) + 0.5 * u0.dx).collect();
    let w: Vec<Vec<f64>> = (0..len).map(|j| frame.to_characteristic(u0.at(j))).collect();
    let mut evolved = vec![vec![0.0; sys.n]; len];
    for (i, law) in frame.laws.iter().enumerate() {
        let data: Vec<f64> = w.iter().map(|v| v[i]).collect();
        let f = |s: f64| (law.flux)(s);
        let sol = front_tracking_scalar(&f, &breaks, &data, t, opts)?;
        for j in 0..len {
            evolved[j][i] = sol.eval(u0.x(j));
        }
    }
    let values = evolved.iter().flat_map(|v| frame.to_state(v)).collect();
    Ok(GridField {
        x0: u0.x0,
        dx: u0.dx,
        t: u0.t + t,
        ncomp: sys.n,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_flux_translates() {
        let opts = FrontTrackingOptions::default();
        let sol = front_tracking_scalar(&|w| 2.0 * w, &[0.0, 1.0], &[0.0, 1.0, 0.0], 0.25, &opts).unwrap();
        assert_eq!(sol.front_positions(), vec![0.5, 1.5]);
        assert_eq!(sol.eval(1.0), 1.0);
        assert_eq!(sol.eval(0.4), 0.0);
    }

    #[test]
    fn burgers_step_down_is_one_shock() {
        let opts = FrontTrackingOptions::default();
        let sol = front_tracking_scalar(&|w| 0.5 * w * w, &[0.0], &[1.0, 0.0], 1.0, &opts).unwrap();
        assert_eq!(sol.front_count(), 1);
        assert_eq!(sol.front_positions(), vec![0.5]);
    }

    #[test]
    fn shock_overtakes_rarefaction() {
        // a rarefaction followed by a faster shock: the fronts must interact
        let opts = FrontTrackingOptions {
            resolution: 64,
            ..Default::default()
        };
        let sol = front_tracking_scalar(&|w| 0.5 * w * w, &[0.0, 0.5], &[0.0, 1.0, 0.0], 4.0, &opts).unwrap();
        assert!(sol.interactions > 0);
        let xs = sol.front_positions();
        assert!(xs.windows(2).all(|p| p[1] >= p[0] - 1e-12));
    }
}
