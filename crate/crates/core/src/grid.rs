//! Uniform one-dimensional grids carrying vector or scalar values.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Values `u_j` at nodes `x_j = x0 + j dx`, stored row-major
/// (`ncomp` consecutive entries per node).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub x0: f64,
    pub dx: f64,
    pub t: f64,
    pub ncomp: usize,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn new(x0: f64, dx: f64, t: f64, ncomp: usize, values: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(LabError::Config(format!("grid spacing must be positive, got {dx}")));
        }
        if ncomp == 0 || !values.len().is_multiple_of(ncomp) {
            return Err(LabError::Config("values length is not a multiple of ncomp".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LabError::Config("grid values must be finite".into()));
        }
        Ok(GridField {
            x0,
            dx,
            t,
            ncomp,
            values,
        })
    }

    /// Grid spanning `[x_min, x_max]` with `cells` nodes, filled from `f`.
    pub fn from_fn(x_min: f64, x_max: f64, cells: usize, ncomp: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        if cells < 2 || !(x_max > x_min) {
            return Err(LabError::Config("grid needs x_min < x_max and two nodes".into()));
        }
        let dx = (x_max - x_min) / (cells - 1) as f64;
        let mut values = Vec::with_capacity(cells * ncomp);
        for j in 0..cells {
            let v = f(x_min + j as f64 * dx);
            if v.len() != ncomp {
                return Err(LabError::Config("initial data has wrong dimension".into()));
            }
            values.extend(v);
        }
        GridField::new(x_min, dx, 0.0, ncomp, values)
    }

    pub fn scalar(x0: f64, dx: f64, t: f64, values: Vec<f64>) -> Result<Self> {
        GridField::new(x0, dx, t, 1, values)
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.ncomp
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.len() - 1)
    }

    pub fn at(&self, j: usize) -> &[f64] {
        &self.values[j * self.ncomp..(j + 1) * self.ncomp]
    }

    pub fn at_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.values[j * self.ncomp..(j + 1) * self.ncomp]
    }

    /// Component `c` as a plain vector.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().skip(c).step_by(self.ncomp).copied().collect()
    }

    pub fn same_grid(&self, other: &GridField) -> bool {
        self.len() == other.len()
            && (self.x0 - other.x0).abs() <= 1e-12 * (1.0 + self.x0.abs())
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
    }

    pub fn require_same_grid(&self, other: &GridField) -> Result<()> {
        if self.same_grid(other) && self.ncomp == other.ncomp {
            Ok(())
        } else {
            Err(LabError::GridMismatch(format!(
                "({} nodes, x0 {}, dx {}, {} comps) vs ({} nodes, x0 {}, dx {}, {} comps)",
                self.len(),
                self.x0,
                self.dx,
                self.ncomp,
                other.len(),
                other.x0,
                other.dx,
                other.ncomp
            )))
        }
    }

    /// Pointwise `self - other`.
    pub fn difference(&self, other: &GridField) -> Result<GridField> {
        self.require_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(GridField { values, ..self.clone() })
    }

    pub fn scaled(&self, factor: f64) -> GridField {
        GridField {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// `theta * self + (1 - theta) * other`.
    pub fn blend(&self, other: &GridField, theta: f64) -> Result<GridField> {
        self.require_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| theta * a + (1.0 - theta) * b)
            .collect();
        Ok(GridField { values, ..self.clone() })
    }

    /// Euclidean norm of the value at node `j`.
    pub fn norm_at(&self, j: usize) -> f64 {
        self.at(j).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Riemann-sum L1 norm with pointwise Euclidean norms.
    pub fn l1_norm(&self) -> f64 {
        (0..self.len()).map(|j| self.norm_at(j)).sum::<f64>() * self.dx
    }

    pub fn l2_norm(&self) -> f64 {
        ((0..self.len()).map(|j| self.norm_at(j).powi(2)).sum::<f64>() * self.dx).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        (0..self.len()).map(|j| self.norm_at(j)).fold(0.0, f64::max)
    }

    /// L1 distance to another field on the same grid.
    pub fn l1_distance(&self, other: &GridField) -> Result<f64> {
        Ok(self.difference(other)?.l1_norm())
    }
}
