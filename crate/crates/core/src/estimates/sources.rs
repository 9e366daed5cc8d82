//! Field-level quantities shared by several studies.

use rayon::prelude::*;

use crate::error::Result;
use crate::frame::frame_fast;
use crate::grid::GridField;
use crate::system::SystemSpec;
use crate::viscous::{gradient_decompose, source_coefficients};

/// Source terms `phi_i` of the gradient-component equations at every node.
///
/// They vanish identically for constant-frame systems, where no
/// coefficients are evaluated. The two end nodes on each side are left at
/// zero (no room for the derivative stencils).
pub fn phi_fields(sys: &SystemSpec, u: &GridField, epsilon: f64) -> Result<Vec<GridField>> {
    let n = sys.n;
    let len = u.len();
    let zero = GridField {
        ncomp: 1,
        values: vec![0.0; len],
        ..u.clone()
    };
    if sys.constant_frame.is_some() || len < 5 {
        return Ok(vec![zero; n]);
    }
    let v = gradient_decompose(sys, u)?;
    let dx = u.dx;
    let rows = (2..len - 2)
        .into_par_iter()
        .map(|j| {
            let c = source_coefficients(sys, u.at(j))?;
            let vj: Vec<f64> = (0..n).map(|i| v[i].values[j]).collect();
            let vx: Vec<f64> = (0..n)
                .map(|i| (v[i].values[j + 1] - v[i].values[j - 1]) / (2.0 * dx))
                .collect();
            Ok(c.phi(&vj, &vx, epsilon))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![zero; n];
    for (k, row) in rows.iter().enumerate() {
        for i in 0..n {
            out[i].values[k + 2] = row[i];
        }
    }
    Ok(out)
}

/// Ranges of the characteristic speeds and the largest viscosity
/// eigenvalue over a set of fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBounds {
    pub lambda_min: Vec<f64>,
    pub lambda_max: Vec<f64>,
    pub mu_max: f64,
}

impl SpectralBounds {
    pub fn max_speed(&self) -> f64 {
        self.lambda_min
            .iter()
            .chain(&self.lambda_max)
            .fold(0.0, |a, v| a.max(v.abs()))
    }
}

pub fn spectral_bounds(sys: &SystemSpec, fields: &[GridField]) -> Result<SpectralBounds> {
    let n = sys.n;
    let mut b = SpectralBounds {
        lambda_min: vec![f64::INFINITY; n],
        lambda_max: vec![f64::NEG_INFINITY; n],
        mu_max: 0.0,
    };
    for f in fields {
        for j in 0..f.len() {
            let frame = frame_fast(sys, f.at(j))?;
            for i in 0..n {
                b.lambda_min[i] = b.lambda_min[i].min(frame.lambda[i]);
                b.lambda_max[i] = b.lambda_max[i].max(frame.lambda[i]);
                b.mu_max = b.mu_max.max(frame.mu[i]);
            }
        }
    }
    Ok(b)
}

/// Trapezoid rule on possibly uneven abscissae, cumulative.
pub fn cumulative_trapezoid(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; t.len()];
    for k in 1..t.len() {
        out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
    }
    out
}
