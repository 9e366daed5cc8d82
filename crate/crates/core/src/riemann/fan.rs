use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{LabError, Result};
use crate::grid::GridField;
use crate::system::SystemSpec;

use super::curves::wave_decomposition;
use super::flux::{scalar_flux_with_nodes, ScalarFlux, MIN_FLUX_NODES};
use super::scalar::{scalar_riemann, ScalarProfile};

/// Envelope refinement stops once two successive tables agree to this.
const HULL_STABILITY: f64 = 1e-10;
const MAX_FLUX_NODES: usize = 1 << 14;

/// Self-similar solution of a Riemann problem.
#[derive(Debug, Clone)]
pub struct RiemannFan {
    pub u_l: Vec<f64>,
    pub u_r: Vec<f64>,
    pub sigma: Vec<f64>,
    pub w: Vec<Vec<f64>>,
    /// Sector boundaries between consecutive families.
    pub lambda_bar: Vec<f64>,
    pub profiles: Vec<ScalarProfile>,
    pub fluxes: Vec<ScalarFlux>,
    /// Whether each family's envelope met the refinement criterion.
    pub hull_converged: Vec<bool>,
}

fn refined_profile(
    sys: &SystemSpec,
    i: usize,
    w_prev: &[f64],
    sigma: f64,
) -> Result<(ScalarFlux, ScalarProfile, bool)> {
    let mut nodes = MIN_FLUX_NODES;
    let mut flux = scalar_flux_with_nodes(sys, i, w_prev, sigma, nodes)?;
    let mut profile = scalar_riemann(&flux)?;
    if flux.is_trivial() {
        return Ok((flux, profile, true));
    }
    while nodes < MAX_FLUX_NODES {
        nodes = 2 * nodes - 1;
        let fine = scalar_flux_with_nodes(sys, i, w_prev, sigma, nodes)?;
        let fine_profile = scalar_riemann(&fine)?;
        let change = (0..flux.nodes())
            .map(|k| {
                let z = flux.omega(k);
                (profile.envelope_at(z) - fine_profile.envelope_at(z)).abs()
            })
            .fold(0.0, f64::max);
        flux = fine;
        profile = fine_profile;
        if change <= HULL_STABILITY {
            return Ok((flux, profile, true));
        }
    }
    Ok((flux, profile, false))
}

/// Builds the fan: wave decomposition, one refined scalar profile per
/// family (in parallel), and sector boundaries at the midpoints of the gaps
/// between consecutive families' speed ranges.
pub fn solve_riemann(sys: &SystemSpec, u_l: &[f64], u_r: &[f64]) -> Result<RiemannFan> {
    let dec = wave_decomposition(sys, u_l, u_r)?;
    let built = (0..sys.n)
        .into_par_iter()
        .map(|i| refined_profile(sys, i, &dec.w[i], dec.sigma[i]))
        .collect::<Result<Vec<_>>>()?;
    let mut fluxes = Vec::with_capacity(sys.n);
    let mut profiles = Vec::with_capacity(sys.n);
    let mut hull_converged = Vec::with_capacity(sys.n);
    for (f, p, c) in built {
        fluxes.push(f);
        profiles.push(p);
        hull_converged.push(c);
    }
    let mut lambda_bar = Vec::with_capacity(sys.n.saturating_sub(1));
    for i in 0..sys.n.saturating_sub(1) {
        let hi = profiles[i].speed_range().1;
        let lo = profiles[i + 1].speed_range().0;
        if hi >= lo {
            return Err(LabError::SectorOverlap { family: i + 1 });
        }
        lambda_bar.push(0.5 * (hi + lo));
    }
    let mut w = dec.w;
    w[0] = u_l.to_vec();
    w[sys.n] = u_r.to_vec();
    Ok(RiemannFan {
        u_l: u_l.to_vec(),
        u_r: u_r.to_vec(),
        sigma: dec.sigma,
        w,
        lambda_bar,
        profiles,
        fluxes,
        hull_converged,
    })
}

impl RiemannFan {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Family whose sector contains `xi`.
    pub fn sector(&self, xi: f64) -> usize {
        self.lambda_bar.partition_point(|b| *b <= xi)
    }

    /// State at `xi = x / t`.
    pub fn sample_xi(&self, xi: f64) -> Vec<f64> {
        let i = self.sector(xi);
        let p = &self.profiles[i];
        if p.is_trivial() {
            return self.w[i].clone();
        }
        let z = p.eval(xi);
        if z == 0.0 {
            self.w[i].clone()
        } else if z == p.sigma {
            self.w[i + 1].clone()
        } else {
            self.fluxes[i].state(z)
        }
    }

    /// `u(t, x)`; at `t = 0` the Riemann data.
    pub fn sample(&self, t: f64, x: f64) -> Vec<f64> {
        if t <= 0.0 {
            return if x < 0.0 { self.u_l.clone() } else { self.u_r.clone() };
        }
        self.sample_xi(x / t)
    }

    /// Speeds bounding the region where the solution is not constant, or
    /// `None` for equal states.
    pub fn active_range(&self) -> Option<(f64, f64)> {
        let ranges: Vec<(f64, f64)> = self
            .profiles
            .iter()
            .filter(|p| !p.is_trivial())
            .map(|p| p.speed_range())
            .collect();
        let lo = ranges.iter().map(|r| r.0).reduce(f64::min)?;
        let hi = ranges.iter().map(|r| r.1).reduce(f64::max)?;
        Some((lo, hi))
    }

    /// Samples the fan centred at `x_jump` on the grid of `like` at time `t`.
    pub fn to_grid(&self, t: f64, x_jump: f64, like: &GridField) -> GridField {
        let values = (0..like.len())
            .flat_map(|j| self.sample(t, like.x(j) - x_jump))
            .collect();
        GridField {
            x0: like.x0,
            dx: like.dx,
            t,
            ncomp: self.u_l.len(),
            values,
        }
    }

    /// Machine-readable description: strengths, states, sector speeds and
    /// the wave list of each family.
    pub fn to_json(&self) -> Value {
        let families: Vec<Value> = self
            .profiles
            .iter()
            .enumerate()
            .map(|(i, p)| {
                json!({
                    "family": i + 1,
                    "sigma": self.sigma[i],
                    "trivial": p.is_trivial(),
                    "waves": p.waves,
                    "entropy_violation": p.entropy_violation,
                    "hull_converged": self.hull_converged[i],
                    "flux_nodes": self.fluxes[i].nodes(),
                })
            })
            .collect();
        json!({
            "u_l": self.u_l,
            "u_r": self.u_r,
            "sigma": self.sigma,
            "w": self.w,
            "lambda_bar": self.lambda_bar,
            "families": families,
        })
    }
}
