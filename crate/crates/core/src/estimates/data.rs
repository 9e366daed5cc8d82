//! Initial data descriptions shared by the studies and the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::frame::frame_fast;
use crate::grid::GridField;
use crate::riemann::PiecewiseConstant;
use crate::system::SystemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// `exp(-s^2)`
    Bump,
    /// `(1 + tanh s) / 2`
    Step,
}

/// `amplitude * shape((x - center) / width) * r_family(base)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveProfile {
    /// One-based family index.
    pub family: usize,
    pub shape: Shape,
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

impl WaveProfile {
    fn value(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.width;
        self.amplitude
            * match self.shape {
                Shape::Bump => (-s * s).exp(),
                Shape::Step => 0.5 * (1.0 + s.tanh()),
            }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialData {
    Constant {
        state: Vec<f64>,
    },
    /// `left` for `x < x_jump`, `right` otherwise.
    Riemann {
        left: Vec<f64>,
        right: Vec<f64>,
        #[serde(default)]
        x_jump: f64,
    },
    /// `states[k]` on `[breaks[k-1], breaks[k])`.
    Piecewise {
        breaks: Vec<f64>,
        states: Vec<Vec<f64>>,
    },
    /// A base state (the box centre when absent) plus wave profiles along
    /// the eigenvectors at the base state.
    Waves {
        #[serde(default)]
        base: Option<Vec<f64>>,
        #[serde(default)]
        waves: Vec<WaveProfile>,
    },
}

impl InitialData {
    pub fn riemann(left: Vec<f64>, right: Vec<f64>, x_jump: f64) -> Self {
        InitialData::Riemann { left, right, x_jump }
    }

    pub fn waves(base: Option<Vec<f64>>, waves: Vec<WaveProfile>) -> Self {
        InitialData::Waves { base, waves }
    }

    fn check_dim(sys: &SystemSpec, v: &[f64]) -> Result<()> {
        if v.len() != sys.n {
            return Err(LabError::Config(format!(
                "state {:?} has {} components, system '{}' has {}",
                v,
                v.len(),
                sys.name,
                sys.n
            )));
        }
        Ok(())
    }

    /// Piecewise-constant form, if the data are piecewise constant.
    pub fn pieces(&self) -> Option<PiecewiseConstant> {
        match self {
            InitialData::Constant { state } => PiecewiseConstant::new(Vec::new(), vec![state.clone()]).ok(),
            InitialData::Riemann { left, right, x_jump } => {
                PiecewiseConstant::new(vec![*x_jump], vec![left.clone(), right.clone()]).ok()
            }
            InitialData::Piecewise { breaks, states } => PiecewiseConstant::new(breaks.clone(), states.clone()).ok(),
            InitialData::Waves { .. } => None,
        }
    }

    /// Samples the data on `cells` nodes spanning `[x_min, x_max]`.
    pub fn sample(&self, sys: &SystemSpec, x_min: f64, x_max: f64, cells: usize) -> Result<GridField> {
        let n = sys.n;
        match self {
            InitialData::Waves { base, waves } => {
                let base = match base {
                    Some(b) => b.clone(),
                    None => sys.domain.from_unit(&vec![0.5; n]),
                };
                Self::check_dim(sys, &base)?;
                let frame = frame_fast(sys, &base)?;
                for w in waves {
                    if w.family == 0 || w.family > n {
                        return Err(LabError::Config(format!("family {} outside 1..={n}", w.family)));
                    }
                    if !(w.width > 0.0) {
                        return Err(LabError::Config("wave width must be positive".into()));
                    }
                }
                GridField::from_fn(x_min, x_max, cells, n, |x| {
                    let mut u = base.clone();
                    for w in waves {
                        let g = w.value(x);
                        for c in 0..n {
                            u[c] += g * frame.right[(c, w.family - 1)];
                        }
                    }
                    u
                })
            }
            _ => {
                let pieces = self
                    .pieces()
                    .ok_or_else(|| LabError::Config("malformed piecewise data".into()))?;
                for s in &pieces.states {
                    Self::check_dim(sys, s)?;
                }
                GridField::from_fn(x_min, x_max, cells, n, |x| pieces.eval(x).to_vec())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system;

    #[test]
    fn riemann_and_waves_sample() {
        let sys = system::rotated2();
        let d = InitialData::riemann(vec![0.1, 0.0], vec![-0.1, 0.05], 0.0);
        let g = d.sample(&sys, -1.0, 1.0, 21).unwrap();
        assert_eq!(g.at(0), &[0.1, 0.0]);
        assert_eq!(g.at(10), &[-0.1, 0.05]);
        let w = InitialData::waves(
            Some(vec![0.0, 0.0]),
            vec![WaveProfile {
                family: 2,
                shape: Shape::Step,
                center: 0.0,
                width: 0.1,
                amplitude: 0.2,
            }],
        );
        let g = w.sample(&sys, -1.0, 1.0, 21).unwrap();
        // the jump is parallel to r_2 = (0.5, 1) / |(0.5, 1)|
        let (a, b) = (g.at(20)[0], g.at(20)[1]);
        assert!((a / b - 0.5).abs() < 1e-12);
        assert!(d.sample(&system::burgers(), -1.0, 1.0, 5).is_err());
    }
}
