//! Pseudospectral solver and verification toolkit for the derivative
//! nonlinear Schrödinger equation `i u_t + u_xx = i ∂_x(|u|² u)` and its
//! gauge-transformed form.
//!
//! All fields live on a periodic grid ([`spectral::Grid`]); functionals,
//! gauge maps, time stepping, sharp-constant checks and the threshold
//! analysis all operate on [`spectral::ComplexField`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
pub mod functionals;
pub mod gauge;
pub mod random;
pub mod spectral;
pub mod threshold;
pub mod variational;

pub use error::{LabError, Result};
pub use spectral::{ComplexField, Grid, GridSpec};
