//! Exact Riemann semigroup for Temple-class systems.
//!
//! A Riemann problem `(u_l, u_r)` is split into waves along the rarefaction
//! curves `R_i(sigma; w)`; across each wave the solution is
//! `R_i(z_i(x/t); w_{i-1})` where `z_i` solves the scalar problem with flux
//! `F_i(omega) = int_0^omega lambda_i(R_i(s; w_{i-1})) ds` and data jumping
//! from `0` to `sigma_i`.

mod curves;
mod fan;
mod flux;
mod front;
mod glued;
mod scalar;

pub use curves::{
    rarefaction_curve, rarefaction_curve_with_step, wave_decomposition, WaveDecomposition, CURVE_STEP, NEWTON_MAX_ITER,
    NEWTON_TOL,
};
pub use fan::{solve_riemann, RiemannFan};
pub use flux::{scalar_flux, scalar_flux_with_nodes, Convexity, ScalarFlux, MIN_FLUX_NODES};
pub use front::{
    exact_semigroup_decoupled, exact_semigroup_decoupled_with, front_tracking_scalar, FrontSolution,
    FrontTrackingOptions,
};
pub use glued::{glued_evolution, GluedEvolution, PiecewiseConstant};
pub use scalar::{lower_envelope, scalar_riemann, ScalarProfile, ScalarWave, WaveKind};
