//! Family-wise change of variables `y = X_i(x)`, `X_i' = mu_i(u)^(-1/2)`.
//!
//! `T(f)_i(y) = f_i(X_i^-1(y))`, so that
//! `int |T(f)_i|^p dy = int |f_i|^p mu_i^(-1/2) dx`.

use crate::error::{LabError, Result};
use crate::frame::frame_fast;
use crate::grid::GridField;
use crate::system::SystemSpec;

/// `X_i` at the grid nodes by cumulative trapezoid sums from the origin.
pub fn warp_coordinates(sys: &SystemSpec, u: &GridField) -> Result<Vec<Vec<f64>>> {
    let n = sys.n;
    let len = u.len();
    let mut inv_sqrt = vec![vec![0.0; len]; n];
    for j in 0..len {
        let frame = frame_fast(sys, u.at(j)).map_err(|e| match e {
            LabError::ViscosityBound { mu, .. } if mu <= 0.0 => LabError::NonPositiveViscosity { mu },
            other => other,
        })?;
        for i in 0..n {
            let mu = frame.mu[i];
            if !(mu > 0.0) {
                return Err(LabError::NonPositiveViscosity { mu });
            }
            inv_sqrt[i][j] = 1.0 / mu.sqrt();
        }
    }
    Ok(inv_sqrt
        .iter()
        .map(|g| {
            let mut x = vec![0.0; len];
            for j in 1..len {
                x[j] = x[j - 1] + 0.5 * u.dx * (g[j - 1] + g[j]);
            }
            x
        })
        .collect())
}

/// Applies `T` to one scalar field per family. Each output lives on a
/// uniform `y`-grid over `[0, X_i(x_max)]` with as many nodes as the input.
pub fn transform_t(sys: &SystemSpec, u: &GridField, f: &[GridField]) -> Result<Vec<GridField>> {
    if f.len() != sys.n {
        return Err(LabError::GridMismatch(format!(
            "expected {} component fields, got {}",
            sys.n,
            f.len()
        )));
    }
    for fi in f {
        if fi.ncomp != 1 || !fi.same_grid(u) {
            return Err(LabError::GridMismatch(
                "component field is not on the state grid".into(),
            ));
        }
    }
    let warp = warp_coordinates(sys, u)?;
    let len = u.len();
    Ok(warp
        .iter()
        .zip(f)
        .map(|(x, fi)| {
            let total = x[len - 1];
            let dy = total / (len - 1) as f64;
            let mut values = Vec::with_capacity(len);
            let mut seg = 0;
            for k in 0..len {
                let y = if k + 1 == len { total } else { k as f64 * dy };
                while seg + 2 < len && x[seg + 1] < y {
                    seg += 1;
                }
                let width = x[seg + 1] - x[seg];
                let theta = ((y - x[seg]) / width).clamp(0.0, 1.0);
                let a = fi.values[seg];
                let b = fi.values[seg + 1];
                values.push(a + theta * (b - a));
            }
            GridField {
                x0: 0.0,
                dx: dy,
                t: fi.t,
                ncomp: 1,
                values,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system;

    #[test]
    fn unit_viscosity_is_identity() {
        let sys = system::heat();
        let u = GridField::from_fn(-1.0, 1.0, 64, 1, |_| vec![0.0]).unwrap();
        let f = GridField::from_fn(-1.0, 1.0, 64, 1, |x| vec![x.sin()]).unwrap();
        let t = transform_t(&sys, &u, std::slice::from_ref(&f)).unwrap();
        assert_eq!(t[0].len(), 64);
        assert!((t[0].dx - f.dx).abs() < 1e-15);
        for (a, b) in t[0].values.iter().zip(&f.values) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
