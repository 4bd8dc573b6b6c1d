//! Mixed finite element solver for the steady generalized Navier–Stokes
//! equations with a shear-rate dependent extra stress of (p, δ)-structure,
//! inhomogeneous Dirichlet data and an inhomogeneous divergence constraint.
//!
//! The crate is organised bottom-up:
//!
//! - [`constitutive`]: the N-function `φ = φ_{p,δ}`, its shifts and conjugates,
//!   and the tensor maps `S` and `F`.
//! - [`mesh`]: the criss-cross triangulation of the unit square and uniform
//!   red refinement.
//! - [`fem`]: quadrature, MINI and Taylor–Hood spaces, Scott–Zhang and
//!   Clément quasi-interpolation, the MINI Fortin operator.
//! - [`solver`]: the discrete saddle-point problem with Temam's convective
//!   form, Newton's method and sparse direct solves.
//! - [`bench`]: manufactured solutions, error norms, EOC tables and the
//!   discrete inf-sup probe.

#![allow(clippy::needless_range_loop, clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod constitutive;
mod error;
pub mod fem;
pub mod mesh;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};

/// A point of the closed unit square.
pub type Point = [f64; 2];
