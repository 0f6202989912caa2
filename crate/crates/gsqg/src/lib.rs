//! Numerical laboratory for the hyperbolic-saddle analysis of the
//! generalized surface quasi-geostrophic (gSQG) equation with transport
//! exponent β ∈ (1,2).
//!
//! The crate has three layers:
//!
//! * closed-form machinery — Gamma/hypergeometric identities, singular
//!   kernel integrals over annuli, and the explicit constants entering the
//!   stream-function and remainder bounds ([`specfun`], [`kernel`],
//!   [`bounds`]);
//! * opening-angle dynamics — envelope ODEs for the saddle angle γ(t),
//!   vanish-time detection, and the blow-up-time quadrature ([`angle`]);
//! * a desk-scale pseudo-spectral simulator on the periodic box with
//!   saddle/elliptic initial data and Hölder/contour diagnostics ([`sim`]).
//!
//! Every closed form ships with an independent oracle (direct summation,
//! adaptive quadrature, or grid measurement) and the test suite holds the
//! two routes against each other at fixed tolerances.

// Frozen reference constants keep every digit of their high-precision
// source, and domain guards are written `!(a < x && x < b)` so that NaN
// fails into the rejecting branch.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_range_contains)]

pub mod angle;
pub mod bounds;
pub mod error;
pub mod kernel;
pub mod sim;
pub mod specfun;
pub mod util;

pub use error::{Error, Result};
