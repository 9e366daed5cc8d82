//! The interaction potential and the experiment protocols built on the
//! viscous solver and the Riemann module.
//!
//! Every study returns an [`EstimateReport`](crate::report::EstimateReport)
//! with named scalars, pass/fail checks and, where it makes sense, a series
//! and a power-law fit.

mod bv;
mod continuity;
mod convergence;
mod data;
mod decay;
mod fit;
mod kernel;
mod propagation;
mod sources;
mod stability;
mod transversal;

pub use bv::{bv_study, default_tv_bound, BvOptions};
pub use continuity::{time_continuity_study, ContinuityOptions};
pub use convergence::{exact_reference, residual_study, vanishing_viscosity_study, ConvergenceOptions};
pub use data::{InitialData, Shape, WaveProfile};
pub use decay::{decay_study, DecayOptions};
pub use fit::{linear_fit, nnls2, power_fit};
pub use kernel::{interaction_potential, interaction_potential_direct, overlap, InteractionKernel};
pub use propagation::{propagation_study, PropagationOptions};
pub use sources::{cumulative_trapezoid, phi_fields, spectral_bounds, SpectralBounds};
pub use stability::{default_l1_bound, homotopy_identity_check, stability_study, StabilityOptions};
pub use transversal::{kernel_for_run, transversal_decay_check, TransversalOptions};
