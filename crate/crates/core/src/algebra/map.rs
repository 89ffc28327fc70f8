//! Coordinate changes of the form `(c x^r, x^s (a y + g(x)))`.

use std::fmt;

use num_traits::{One, Zero};

use super::field::VectorField2;
use super::poly::PuiseuxPoly;
use super::rational::{fmt_rat, pow_rat, Rational};
use crate::error::{Error, Result};

/// Monomial-triangular map `F(x, y) = (c x^r, x^s (a y + g(x)))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoTriMap {
    c: Rational,
    r: Rational,
    a: Rational,
    s: Rational,
    g: PuiseuxPoly,
}

/// Row `n`, column `i` holds `dF^n / dx^i`.
pub type Jacobian = [[PuiseuxPoly; 2]; 2];

impl MonoTriMap {
    pub fn new(c: Rational, r: Rational, a: Rational, s: Rational, g: PuiseuxPoly) -> Result<Self> {
        if c.is_zero() || r.is_zero() || a.is_zero() {
            return Err(Error::InvalidParams(
                "map needs c, r and a nonzero".into(),
            ));
        }
        if !g.is_x_only() {
            return Err(Error::InvalidParams("g must not depend on y".into()));
        }
        Ok(Self { c, r, a, s, g })
    }

    pub fn identity() -> Self {
        Self {
            c: Rational::one(),
            r: Rational::one(),
            a: Rational::one(),
            s: Rational::zero(),
            g: PuiseuxPoly::zero(),
        }
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }
    pub fn r(&self) -> &Rational {
        &self.r
    }
    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn s(&self) -> &Rational {
        &self.s
    }
    pub fn g(&self) -> &PuiseuxPoly {
        &self.g
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// First component `c x^r`.
    pub fn x_component(&self) -> PuiseuxPoly {
        PuiseuxPoly::term(self.c.clone(), self.r.clone(), 0)
    }

    /// Second component `a x^s y + x^s g`.
    pub fn y_component(&self) -> PuiseuxPoly {
        let lin = PuiseuxPoly::term(self.a.clone(), self.s.clone(), 1);
        lin + self.g.mul_monomial(&Rational::one(), &self.s, 0)
    }

    /// Reads a map back from its two components.
    pub fn from_components(p1: &PuiseuxPoly, p2: &PuiseuxPoly) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("({p1}, {p2}) is not monomial-triangular"));
        let (c, r, ye) = p1.as_monomial().ok_or_else(bad)?;
        if ye != 0 {
            return Err(bad());
        }
        let mut lin = None;
        let mut rest = PuiseuxPoly::zero();
        for (k, xe, ye) in p2.terms() {
            match ye {
                0 => rest.add_term(k.clone(), xe.clone(), 0),
                1 if lin.is_none() => lin = Some((k.clone(), xe.clone())),
                _ => return Err(bad()),
            }
        }
        let (a, s) = lin.ok_or_else(bad)?;
        let g = rest.div_monomial(&Rational::one(), &s, 0).ok_or_else(bad)?;
        Self::new(c, r, a, s, g)
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &MonoTriMap) -> Result<Self> {
        let p1 = inner.substitute(&self.x_component())?;
        let p2 = inner.substitute(&self.y_component())?;
        Self::from_components(&p1, &p2)
    }

    /// Two-sided inverse on `x > 0`. Fails when `c^(-1/r)` is not rational.
    pub fn invert(&self) -> Result<Self> {
        let r2 = self.r.recip();
        let c2 = pow_rat(&self.c, &-&r2)?;
        let s2 = -(&self.s * &r2);
        let c2s = pow_rat(&c2, &self.s)?;
        let a2 = (&self.a * c2s).recip();
        let ginv = self.g.substitute_x(&c2, &r2)?;
        let g2 = ginv
            .mul_monomial(&(-self.a.recip()), &-&s2, 0);
        Self::new(c2, r2, a2, s2, g2)
    }

    /// Exact pullback `p ∘ F`.
    pub fn substitute(&self, p: &PuiseuxPoly) -> Result<PuiseuxPoly> {
        let inner = PuiseuxPoly::term(self.a.clone(), Rational::zero(), 1) + &self.g;
        let mut powers = vec![PuiseuxPoly::one()];
        let mut out = PuiseuxPoly::zero();
        for (k, xe, ye) in p.terms() {
            while powers.len() <= ye as usize {
                let next = powers.last().unwrap() * &inner;
                powers.push(next);
            }
            let f = pow_rat(&self.c, xe)?;
            let xexp = &self.r * xe + &self.s * Rational::from_integer(ye.into());
            out += powers[ye as usize].mul_monomial(&(k * f), &xexp, 0);
        }
        Ok(out)
    }

    pub fn jacobian(&self) -> Jacobian {
        let f1 = self.x_component();
        let f2 = self.y_component();
        [[f1.dx(), f1.dy()], [f2.dx(), f2.dy()]]
    }

    /// Inverse Jacobian; the matrix is lower triangular with monomial diagonal.
    pub fn inverse_jacobian(&self) -> Jacobian {
        let [[j11, _], [j21, j22]] = self.jacobian();
        let i11 = PuiseuxPoly::one().div_by(&j11).expect("monomial diagonal");
        let i22 = PuiseuxPoly::one().div_by(&j22).expect("monomial diagonal");
        let i21 = -(&(&j21 * &i11) * &i22);
        [[i11, PuiseuxPoly::zero()], [i21, i22]]
    }

    /// Pushforward `(J V) ∘ F^{-1}`.
    pub fn push_forward(&self, v: &VectorField2) -> Result<VectorField2> {
        let j = self.jacobian();
        let inv = self.invert()?;
        let wx = &j[0][0] * &v.cx + &j[0][1] * &v.cy;
        let wy = &j[1][0] * &v.cx + &j[1][1] * &v.cy;
        Ok(VectorField2::new(inv.substitute(&wx)?, inv.substitute(&wy)?))
    }

    /// Pullback `F^* W = (J^{-1} W∘F)`.
    pub fn pull_back(&self, w: &VectorField2) -> Result<VectorField2> {
        let inv = self.inverse_jacobian();
        let wx = self.substitute(&w.cx)?;
        let wy = self.substitute(&w.cy)?;
        Ok(VectorField2::new(
            &inv[0][0] * &wx + &inv[0][1] * &wy,
            &inv[1][0] * &wx + &inv[1][1] * &wy,
        ))
    }

    pub fn apply_f64(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        Ok((
            self.x_component().eval_f64(x, y)?,
            self.y_component().eval_f64(x, y)?,
        ))
    }
}

impl fmt::Display for MonoTriMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(c={}, r={}, a={}, s={}, g={})",
            fmt_rat(&self.c),
            fmt_rat(&self.r),
            fmt_rat(&self.a),
            fmt_rat(&self.s),
            self.g
        )
    }
}
