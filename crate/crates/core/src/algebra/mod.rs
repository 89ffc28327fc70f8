//! Exact arithmetic: rationals, Puiseux polynomials, vector fields and
//! monomial-triangular maps.

pub mod field;
pub mod linalg;
pub mod map;
pub mod poly;
pub mod rational;

pub use field::VectorField2;
pub use map::{Jacobian, MonoTriMap};
pub use poly::{PuiseuxPoly, Var};
pub use rational::{int, rat, Rational};
