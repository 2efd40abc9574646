//! Holonomic gate dynamics in four-level lambda systems beyond the
//! adiabatic limit.
//!
//! The library solves the abelian and non-abelian loop Hamiltonians of
//! the optical holonomic gate scheme in closed form (cranking and gauge
//! transformations make both loops time-independent in a rotating frame),
//! cross-validates every closed form against a fixed-step RK4 integrator,
//! and quantifies the leakage and phase errors that nonadiabatic driving
//! inflicts on the ideal geometric gates.
//!
//! Module map:
//! - [`numerics`]: small dense complex linear algebra and the real-cubic
//!   root solver
//! - [`models`]: level bases, loop parameters, Hamiltonians, dark states,
//!   matching interactions, the two-qubit effective model
//! - [`abelian`]: invariant spectrum, recurrent basis, closed-form
//!   propagator, leakage overlap, total phase, sweeps
//! - [`nonabelian`]: gauged system, exact and cyclic propagators, ideal
//!   holonomy, projected gate, population sweeps
//! - [`oracle`]: the RK4 referee
//! - [`experiments`]: matching-interaction preparation and the two-qubit
//!   controlled phase
//! - [`verify`]: the cross-check suite behind `holonomy verify`
//! - [`format`]: deterministic CSV emission

pub mod abelian;
pub mod error;
pub mod experiments;
pub mod format;
pub mod models;
pub mod nonabelian;
pub mod numerics;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
