//! Interaction potential between two transversal wave families.
//!
//! ```text
//! Q(z, z#) = int int K(x - y) |z(x)| |z#(y)| dx dy,
//! K(s) = 1/c for s >= 0,   K(s) = exp(c s / (2 c1)) / c for s < 0,
//! ```
//!
//! with `z` the slower and `z#` the faster family, `c` a lower bound of
//! the speed gap and `c1` an upper bound of both viscosities.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionKernel {
    pub c: f64,
    pub c1: f64,
}

impl InteractionKernel {
    pub fn new(c: f64, c1: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(LabError::SpeedGapViolated { gap: c });
        }
        if !(c1 > 0.0) || !c1.is_finite() {
            return Err(LabError::Config(format!(
                "kernel viscosity bound must be positive, got {c1}"
            )));
        }
        Ok(InteractionKernel { c, c1 })
    }

    /// Decay rate `c / (2 c1)` of the left branch.
    pub fn rate(&self) -> f64 {
        self.c / (2.0 * self.c1)
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s >= 0.0 {
            1.0 / self.c
        } else {
            (self.rate() * s).exp() / self.c
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        if s >= 0.0 {
            0.0
        } else {
            self.rate() * self.eval(s)
        }
    }

    pub fn second_derivative(&self, s: f64) -> f64 {
        if s >= 0.0 {
            0.0
        } else {
            self.rate() * self.rate() * self.eval(s)
        }
    }

    /// `c K'(s) - 2 c1 K''(s)`, which vanishes away from `s = 0`.
    pub fn ode_defect(&self, s: f64) -> f64 {
        self.c * self.derivative(s) - 2.0 * self.c1 * self.second_derivative(s)
    }
}

fn check_pair(z: &GridField, z_sharp: &GridField) -> Result<()> {
    z.require_same_grid(z_sharp)?;
    if z.ncomp != 1 {
        return Err(LabError::GridMismatch(
            "interaction potential needs scalar fields".into(),
        ));
    }
    Ok(())
}

/// `Q(z, z#)` as a double Riemann sum over the nodes with the exact kernel,
/// in `O(N)` operations: the constant branch by prefix sums and the
/// exponential branch by a backward recursion.
pub fn interaction_potential(z: &GridField, z_sharp: &GridField, k: &InteractionKernel) -> Result<f64> {
    check_pair(z, z_sharp)?;
    let dx = z.dx;
    let a: Vec<f64> = z.values.iter().map(|v| v.abs()).collect();
    let b: Vec<f64> = z_sharp.values.iter().map(|v| v.abs()).collect();
    let decay = (-k.rate() * dx).exp();
    let n = a.len();
    let mut prefix = 0.0;
    let mut flat = 0.0;
    for j in 0..n {
        prefix += b[j];
        flat += a[j] * prefix;
    }
    let mut tail = 0.0;
    let mut curved = 0.0;
    for j in (0..n).rev() {
        curved += a[j] * tail;
        tail = decay * (b[j] + tail);
    }
    Ok((flat + curved) * dx * dx / k.c)
}

/// Direct `O(N^2)` evaluation of the same double sum.
pub fn interaction_potential_direct(z: &GridField, z_sharp: &GridField, k: &InteractionKernel) -> Result<f64> {
    check_pair(z, z_sharp)?;
    let dx = z.dx;
    let mut total = 0.0;
    for (j, a) in z.values.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        let row: f64 = z_sharp
            .values
            .iter()
            .enumerate()
            .map(|(m, b)| k.eval((j as f64 - m as f64) * dx) * b.abs())
            .sum();
        total += a.abs() * row;
    }
    Ok(total * dx * dx)
}

/// `int |z| |z#| dx` as a Riemann sum.
pub fn overlap(z: &GridField, z_sharp: &GridField) -> Result<f64> {
    check_pair(z, z_sharp)?;
    Ok(z.values
        .iter()
        .zip(&z_sharp.values)
        .map(|(a, b)| (a * b).abs())
        .sum::<f64>()
        * z.dx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        let k = InteractionKernel::new(2.0, 0.5).unwrap();
        assert_eq!(k.eval(0.0), 0.5);
        assert_eq!(k.eval(3.0), 0.5);
        assert!(k.eval(-100.0) < 1e-80);
        assert!(InteractionKernel::new(0.0, 1.0).is_err());
        assert!(InteractionKernel::new(1.0, -1.0).is_err());
    }

    #[test]
    fn fast_path_matches_direct_sum() {
        let z = GridField::from_fn(-2.0, 2.0, 301, 1, |x| {
            vec![(-4.0 * (x - 0.3) * (x - 0.3)).exp() * x.cos()]
        })
        .unwrap();
        let zs = GridField::from_fn(-2.0, 2.0, 301, 1, |x| {
            vec![(-3.0 * (x + 0.5) * (x + 0.5)).exp() - 0.2 * x]
        })
        .unwrap();
        let k = InteractionKernel::new(1.3, 0.7).unwrap();
        let fast = interaction_potential(&z, &zs, &k).unwrap();
        let direct = interaction_potential_direct(&z, &zs, &k).unwrap();
        assert!((fast - direct).abs() < 1e-12 * direct);
    }
}
