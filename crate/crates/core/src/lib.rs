//! Quasihomogeneous torsion-free affine connections on surfaces.
//!
//! Exact algebra on Puiseux polynomials drives the symbolic parts (normal
//! forms, Killing fields, pullbacks, markings, gluing); geodesics are
//! integrated numerically.

pub mod affine;
pub mod algebra;
pub mod catalog;
pub mod connection;
pub mod error;
pub mod geodesics;
pub mod gluing;
pub mod io;
pub mod killing;

pub use algebra::{int, rat, MonoTriMap, PuiseuxPoly, Rational, VectorField2};
pub use error::{Error, Result};
