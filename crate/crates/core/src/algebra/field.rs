//! Planar vector fields with Puiseux polynomial components.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::poly::PuiseuxPoly;
use super::rational::Rational;
use crate::error::Result;

/// `cx * d/dx + cy * d/dy`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VectorField2 {
    pub cx: PuiseuxPoly,
    pub cy: PuiseuxPoly,
}

impl VectorField2 {
    pub fn new(cx: PuiseuxPoly, cy: PuiseuxPoly) -> Self {
        Self { cx, cy }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dx() -> Self {
        Self::new(PuiseuxPoly::one(), PuiseuxPoly::zero())
    }

    pub fn dy() -> Self {
        Self::new(PuiseuxPoly::zero(), PuiseuxPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.cx.is_zero() && self.cy.is_zero()
    }

    pub fn component(&self, k: usize) -> &PuiseuxPoly {
        match k {
            0 => &self.cx,
            1 => &self.cy,
            _ => panic!("component index {k} out of range"),
        }
    }

    /// Directional derivative `V(p)`.
    pub fn apply(&self, p: &PuiseuxPoly) -> PuiseuxPoly {
        &self.cx * &p.dx() + &self.cy * &p.dy()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.cx.scale(k), self.cy.scale(k))
    }

    pub fn mul_poly(&self, p: &PuiseuxPoly) -> Self {
        Self::new(p * &self.cx, p * &self.cy)
    }

    /// Lie bracket `[V, W]`.
    pub fn bracket(&self, w: &VectorField2) -> Self {
        Self::new(
            self.apply(&w.cx) - w.apply(&self.cx),
            self.apply(&w.cy) - w.apply(&self.cy),
        )
    }

    pub fn eval_exact(&self, x0: &Rational, y0: &Rational) -> Result<[Rational; 2]> {
        Ok([self.cx.eval_exact(x0, y0)?, self.cy.eval_exact(x0, y0)?])
    }

    pub fn eval_f64(&self, x0: f64, y0: f64) -> Result<[f64; 2]> {
        Ok([self.cx.eval_f64(x0, y0)?, self.cy.eval_f64(x0, y0)?])
    }
}

impl fmt::Display for VectorField2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})d/dx + ({})d/dy", self.cx, self.cy)
    }
}

impl Add<&VectorField2> for &VectorField2 {
    type Output = VectorField2;
    fn add(self, rhs: &VectorField2) -> VectorField2 {
        VectorField2::new(&self.cx + &rhs.cx, &self.cy + &rhs.cy)
    }
}

impl Sub<&VectorField2> for &VectorField2 {
    type Output = VectorField2;
    fn sub(self, rhs: &VectorField2) -> VectorField2 {
        VectorField2::new(&self.cx - &rhs.cx, &self.cy - &rhs.cy)
    }
}

impl Add for VectorField2 {
    type Output = VectorField2;
    fn add(self, rhs: VectorField2) -> VectorField2 {
        &self + &rhs
    }
}

impl Sub for VectorField2 {
    type Output = VectorField2;
    fn sub(self, rhs: VectorField2) -> VectorField2 {
        &self - &rhs
    }
}

impl Neg for &VectorField2 {
    type Output = VectorField2;
    fn neg(self) -> VectorField2 {
        VectorField2::new(-&self.cx, -&self.cy)
    }
}

impl Neg for VectorField2 {
    type Output = VectorField2;
    fn neg(self) -> VectorField2 {
        -&self
    }
}
