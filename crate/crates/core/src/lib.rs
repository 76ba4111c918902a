//! Solver and verifier toolkit for initial–boundary value problems of scalar
//! balance laws `∂ₜu + ∇·f(t,x,u) = F(t,x,u)` on bounded domains.
//!
//! The crate has three layers:
//!
//! * [`flux`], [`sign`], [`interval`] and [`entropy`] provide the problem data
//!   (flux/source models) together with entropy–entropy flux pairs, including
//!   the Kruzhkov and semi-Kruzhkov pairs and the smoothed approximating
//!   families used to pass between the Lipschitz and the smooth world.
//! * [`boundary`] implements the flux-comparison function in its three closed
//!   forms and the pointwise boundary admissibility conditions (BLN,
//!   sign-form, flux-comparison, Dubois–LeFloch, zero-entropy), plus a
//!   brute-force sweep that cross-checks that all conditions issue the same
//!   verdict on random trace/datum pairs.
//! * [`solver`] is a 1D finite-volume Godunov scheme with ghost-cell boundary
//!   treatment, and [`residual`] evaluates the integral inequalities of the
//!   four solution definitions (RE/MV/E/BLN) on discrete or closed-form
//!   fields, including boundary-limit estimates and a strong-solution
//!   verifier.
//!
//! Everything is deterministic under a fixed seed; sweeps parallelise with
//! per-sample seeds so serial and parallel runs agree bitwise.

pub mod boundary;
pub mod entropy;
pub mod error;
pub mod flux;
pub mod interval;
pub mod quad;
pub mod residual;
pub mod sampling;
pub mod sign;
pub mod solver;

pub use error::CoreError;
pub use flux::FluxModel;
pub use interval::Interval;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, CoreError>;
