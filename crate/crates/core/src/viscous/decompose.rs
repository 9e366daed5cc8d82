use crate::error::Result;
use crate::frame::frame_fast;
use crate::grid::GridField;
use crate::system::SystemSpec;

/// `u_x` by central differences, one-sided at the two ends.
pub fn central_gradient(u: &GridField) -> GridField {
    let n = u.ncomp;
    let len = u.len();
    let mut values = vec![0.0; u.values.len()];
    for j in 0..len {
        let (a, b, h) = if j == 0 {
            (0, 1, u.dx)
        } else if j + 1 == len {
            (len - 2, len - 1, u.dx)
        } else {
            (j - 1, j + 1, 2.0 * u.dx)
        };
        for c in 0..n {
            values[j * n + c] = (u.at(b)[c] - u.at(a)[c]) / h;
        }
    }
    GridField { values, ..u.clone() }
}

/// `u_xx` by the three-point stencil, with constant-extension ghosts.
pub fn second_difference(u: &GridField) -> GridField {
    let n = u.ncomp;
    let len = u.len();
    let mut values = vec![0.0; u.values.len()];
    let h2 = u.dx * u.dx;
    for j in 0..len {
        let l = j.saturating_sub(1);
        let r = (j + 1).min(len - 1);
        for c in 0..n {
            values[j * n + c] = (u.at(r)[c] - 2.0 * u.at(j)[c] + u.at(l)[c]) / h2;
        }
    }
    GridField { values, ..u.clone() }
}

/// Components `v_i = l_i(u) . u_x` of the gradient in the eigenframe, one
/// scalar field per family.
pub fn gradient_decompose(sys: &SystemSpec, u: &GridField) -> Result<Vec<GridField>> {
    let ux = central_gradient(u);
    let n = sys.n;
    let len = u.len();
    let mut out = vec![vec![0.0; len]; n];
    for j in 0..len {
        let frame = frame_fast(sys, u.at(j))?;
        let coeffs = frame.project(ux.at(j));
        for i in 0..n {
            out[i][j] = coeffs[i];
        }
    }
    Ok(out
        .into_iter()
        .map(|values| GridField {
            x0: u.x0,
            dx: u.dx,
            t: u.t,
            ncomp: 1,
            values,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system;

    #[test]
    fn decomposition_reconstructs_gradient() {
        let sys = system::chromatography();
        let u = GridField::from_fn(-1.0, 1.0, 101, 2, |x| {
            vec![0.4 + 0.2 * (3.0 * x).sin(), 0.5 + 0.1 * (2.0 * x).cos()]
        })
        .unwrap();
        let v = gradient_decompose(&sys, &u).unwrap();
        let ux = central_gradient(&u);
        for j in 0..u.len() {
            let frame = frame_fast(&sys, u.at(j)).unwrap();
            let rebuilt = frame.r(0) * v[0].values[j] + frame.r(1) * v[1].values[j];
            for c in 0..2 {
                assert!((rebuilt[c] - ux.at(j)[c]).abs() <= 1e-12 * (1.0 + ux.at(j)[c].abs()));
            }
        }
    }
}
