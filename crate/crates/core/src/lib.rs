//! Representation theory of `so(n)` applied to boundary terms of
//! Weitzenböck formulas on asymptotically flat manifolds.
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`] does exact arithmetic on dominant weights: Casimir numbers,
//!   Weyl dimensions, the splitting of `R^n ⊗ V` and conformal weights.
//! * [`spectral`] builds explicit matrix representations, the conformal
//!   weight operator `B` and the projections onto the summands of `R^n ⊗ V`.
//! * [`weitzenbock`] finds the coefficient vectors whose second order symbol
//!   vanishes and computes the mass coefficient `μ(a)`.
//! * [`geometry`] evaluates asymptotically flat metrics, their connection
//!   forms, the ADM mass and the boundary term of a Weitzenböck formula by
//!   sphere quadrature and extrapolation in the radius.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the tensor notation of the formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod geometry;
pub mod rational;
pub mod sampling;
pub mod spectral;
pub mod weights;
pub mod weitzenbock;

pub use error::{Error, Result};
pub use rational::Rational;
