//! Horizontal velocity profiles of a stationary compressible boundary layer
//! under the no-back-flow condition.
//!
//! The reduced first-order equation
//!
//! ```text
//! du/ds = c * (1 - u^2/(2*i0))^(-6/25)
//! ```
//!
//! is separable; this crate solves it to reference accuracy by quadrature
//! plus root inversion and, independently, by adaptive Runge-Kutta
//! integration ([`solver`]). Around the exact solution it builds the
//! small-velocity series of the nonlinear factor with an independent
//! binomial oracle ([`series`]), the Pohlhausen quartic profile family and
//! the one-step Picard approximants derived from it ([`pohlhausen`]), and
//! the density-weighted coordinate transform that maps the physical domain
//! into the (ell, s) plane ([`transform`]).
//!
//! All quantities may be nondimensionalized; see [`flow::FlowParams`].

// Validation comparisons are written `!(x > 0.0)` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod error;
pub mod flow;
pub mod numeric;
pub mod pohlhausen;
pub mod profile;
pub mod series;
pub mod solver;
pub mod transform;

pub use domain::{BoundaryHeight, DomainSpec};
pub use error::{Error, Result};
pub use flow::FlowParams;
pub use profile::{ProfileKind, ProfileTable};
