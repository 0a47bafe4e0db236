//! Pseudo-spectral laboratory for the generalized MHD-α system on the
//! 2π-periodic torus.
//!
//! The crate is organized around the constructive content of a local
//! existence argument for the mild (Duhamel) formulation:
//!
//! * [`spectral`] — grids, spectral vector fields, Bessel-potential Sobolev
//!   norms and the Fourier multipliers `L_i`, `e^{tL_i}`, `(1 - L_3)^{-1}`
//!   and the Leray projection.
//! * [`nonlinear`] — the bilinear maps `W1`, `W2`, `W3` built from dealiased
//!   pseudo-spectral products.
//! * [`solver`] — the Duhamel map and its Picard iteration, with the weighted
//!   norms of the contraction argument.
//! * [`checker`] — exact evaluation of the parameter inequality system,
//!   minimal admissible dissipation orders and dominance audits.
//! * [`estimates`] — numerical probes of the operator estimates the
//!   contraction argument rests on.

// `!(x > y)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checker;
pub mod error;
pub mod estimates;
pub mod nonlinear;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{GFunction, Grid, MultiplierSpec, SpectralField};
