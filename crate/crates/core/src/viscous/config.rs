use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Ghost values copy the end values.
    #[default]
    ConstantExtension,
    /// Node `N - 1` neighbours node `0`.
    Periodic,
}

/// Discretisation of the convective term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Convection {
    /// Flux form when the system has a flux, characteristic otherwise.
    #[default]
    Auto,
    /// Conservative flux differences with characteristic-wise local
    /// Lax-Friedrichs dissipation. Requires a flux.
    Flux,
    /// Node-wise upwinding of `A(u) u_x` family by family.
    Characteristic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub epsilon: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_end: f64,
    #[serde(default)]
    pub boundary: Boundary,
    /// Output times; empty means `[t_end]`.
    #[serde(default)]
    pub record_times: Vec<f64>,
    #[serde(default)]
    pub convection: Convection,
    /// Overrides the CFL step. Stability is then the caller's business.
    #[serde(default)]
    pub fixed_dt: Option<f64>,
}

fn default_cfl() -> f64 {
    0.4
}

impl SolveConfig {
    pub fn new(epsilon: f64, t_end: f64) -> Self {
        SolveConfig {
            epsilon,
            cfl: default_cfl(),
            t_end,
            boundary: Boundary::ConstantExtension,
            record_times: Vec::new(),
            convection: Convection::Auto,
            fixed_dt: None,
        }
    }

    pub fn with_records(mut self, times: Vec<f64>) -> Self {
        self.record_times = times;
        self
    }

    /// `count + 1` equally spaced records on `[0, t_end]`.
    pub fn with_uniform_records(self, count: usize) -> Self {
        let t_end = self.t_end;
        self.with_records((0..=count).map(|k| t_end * k as f64 / count as f64).collect())
    }

    pub fn with_fixed_dt(mut self, dt: f64) -> Self {
        self.fixed_dt = Some(dt);
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_convection(mut self, convection: Convection) -> Self {
        self.convection = convection;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(LabError::Config(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(LabError::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(LabError::Config(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0) {
                return Err(LabError::Config("fixed_dt must be positive".into()));
            }
        }
        let times = self.records();
        if times.iter().any(|t| !(*t >= 0.0 && *t <= self.t_end * (1.0 + 1e-12))) {
            return Err(LabError::Config("record times must lie in [0, t_end]".into()));
        }
        if times.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(LabError::Config("record times must be non-decreasing".into()));
        }
        Ok(())
    }

    /// Effective output times.
    pub fn records(&self) -> Vec<f64> {
        if self.record_times.is_empty() {
            vec![self.t_end]
        } else {
            self.record_times.clone()
        }
    }
}
