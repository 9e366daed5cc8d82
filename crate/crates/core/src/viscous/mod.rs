//! The viscous system on a uniform grid and the quantities derived from it.

mod coefficients;
mod config;
mod decompose;
mod diagnostics;
mod linearized;
mod residual;
mod solver;
mod transform;

pub use coefficients::{source_coefficients, source_coefficients_with_steps, SourceCoefficients};
pub use config::{Boundary, Convection, SolveConfig};
pub use decompose::{central_gradient, gradient_decompose, second_difference};
pub use diagnostics::{diagnostics, diagnostics_about, total_variation};
pub use linearized::{solve_linearized, solve_tangent, TangentSolution};
pub use residual::residual_v_equation;
pub use solver::{solve_viscous, stable_dt};
pub use transform::{transform_t, warp_coordinates};
