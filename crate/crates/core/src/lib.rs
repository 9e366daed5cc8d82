//! Numerical laboratory for strictly hyperbolic Temple-class systems with
//! commuting nonlinear viscosity
//!
//! ```text
//! u_t + A(u) u_x = eps (B(u) u_x)_x,    A(u) B(u) = B(u) A(u).
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`system`] and [`frame`]: system definitions, the shared eigenframe and
//!   the hypothesis checks.
//! * [`viscous`]: the explicit viscous solver, the gradient decomposition,
//!   the source coefficients of the `v`- and `h`-equations, the linearized
//!   solver and the coordinate transform `T`.
//! * [`riemann`]: rarefaction curves, wave decomposition, scalar entropy
//!   solutions, Riemann fans, glued evolutions and a front-tracking oracle.
//! * [`estimates`]: the interaction potential and the experiment protocols.

// NaN must fail `!(a < b)` style guards; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod estimates;
pub mod expr;
pub mod frame;
pub mod grid;
pub mod io;
pub mod report;
pub mod riemann;
pub mod system;
pub mod viscous;

pub use error::{LabError, Result};
pub use frame::{compute_frame, EigenFrame};
pub use grid::GridField;
pub use report::{EstimateReport, Relation};
pub use system::{DomainBox, SystemSpec};
