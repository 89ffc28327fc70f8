//! Finite sums of terms `c * x^(p/q) * y^m`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rat, int, is_integer, pow_rat, to_f64, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Exact Puiseux polynomial in `x` (rational exponents) and `y` (natural exponents).
///
/// Terms are keyed by `(xexp, yexp)` and kept in lexicographic order; zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PuiseuxPoly {
    terms: BTreeMap<(Rational, u32), Rational>,
}

impl PuiseuxPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Rational::zero(), 0)
    }

    pub fn term(c: Rational, xe: Rational, ye: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, xe, ye);
        p
    }

    pub fn x() -> Self {
        Self::term(Rational::one(), Rational::one(), 0)
    }

    pub fn y() -> Self {
        Self::term(Rational::one(), Rational::zero(), 1)
    }

    /// Sum of the given terms; repeated keys are combined.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Rational, u32)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (c, xe, ye) in it {
            p.add_term(c, xe, ye);
        }
        p
    }

    pub fn add_term(&mut self, c: Rational, xe: Rational, ye: u32) {
        if c.is_zero() {
            return;
        }
        let key = (xe, ye);
        let v = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Iterates `(coeff, xexp, yexp)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational, u32)> {
        self.terms.iter().map(|((xe, ye), c)| (c, xe, *ye))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, xe: &Rational, ye: u32) -> Rational {
        self.terms
            .get(&(xe.clone(), ye))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// The value if this is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(Rational::zero(), 0)).cloned(),
            _ => None,
        }
    }

    /// `(coeff, xexp, yexp)` when the polynomial is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(Rational, Rational, u32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((xe, ye), c) = self.terms.iter().next()?;
        Some((c.clone(), xe.clone(), *ye))
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|(_, ye)| *ye == 0)
    }

    pub fn max_yexp(&self) -> u32 {
        self.terms.keys().map(|(_, ye)| *ye).max().unwrap_or(0)
    }

    pub fn min_xexp(&self) -> Option<Rational> {
        self.terms.keys().map(|(xe, _)| xe.clone()).min()
    }

    /// True when every x-exponent is a nonnegative integer.
    pub fn is_polynomial_in_x(&self) -> bool {
        self.terms
            .keys()
            .all(|(xe, _)| is_integer(xe) && !xe.is_negative())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| (key.clone(), c * k))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, xe: &Rational, ye: u32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|((x, y), k)| ((x + xe, y + ye), k * c))
                .collect(),
        }
    }

    /// Division by the monomial `c x^xe y^ye`.
    ///
    /// Returns `None` when `c == 0` or a y-exponent would go negative.
    pub fn div_monomial(&self, c: &Rational, xe: &Rational, ye: u32) -> Option<Self> {
        if c.is_zero() {
            return None;
        }
        let inv = c.recip();
        let mut terms = BTreeMap::new();
        for ((x, y), k) in &self.terms {
            let ny = y.checked_sub(ye)?;
            terms.insert((x - xe, ny), k * &inv);
        }
        Some(Self { terms })
    }

    /// Division by a polynomial that must be a single term.
    pub fn div_by(&self, m: &PuiseuxPoly) -> Option<Self> {
        let (c, xe, ye) = m.as_monomial()?;
        self.div_monomial(&c, &xe, ye)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derive(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for ((xe, ye), c) in &self.terms {
            match var {
                Var::X => out.add_term(c * xe, xe - Rational::one(), *ye),
                Var::Y => {
                    if *ye > 0 {
                        out.add_term(c * int(*ye as i64), xe.clone(), ye - 1)
                    }
                }
            }
        }
        out
    }

    pub fn dx(&self) -> Self {
        self.derive(Var::X)
    }

    pub fn dy(&self) -> Self {
        self.derive(Var::Y)
    }

    fn check_domain(&self, x_nonpositive: bool, x_zero: bool) -> Result<()> {
        for (xe, _) in self.terms.keys() {
            let fractional = !is_integer(xe);
            if x_nonpositive && fractional {
                return Err(Error::Domain(format!(
                    "x^({}) needs x > 0",
                    fmt_rat(xe)
                )));
            }
            if x_zero && xe.is_negative() {
                return Err(Error::Domain(format!("x^({}) has a pole at x = 0", fmt_rat(xe))));
            }
        }
        Ok(())
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, x0: &Rational, y0: &Rational) -> Result<Rational> {
        self.check_domain(!x0.is_positive(), x0.is_zero())?;
        let mut acc = Rational::zero();
        for ((xe, ye), c) in &self.terms {
            let xv = pow_rat(x0, xe)?;
            acc += c * xv * num_traits::pow(y0.clone(), *ye as usize);
        }
        Ok(acc)
    }

    /// Floating point value; fractional powers use the real branch on x > 0.
    pub fn eval_f64(&self, x0: f64, y0: f64) -> Result<f64> {
        self.check_domain(x0 <= 0.0, x0 == 0.0)?;
        let mut acc = 0.0;
        for ((xe, ye), c) in &self.terms {
            let xv = x0.powf(to_f64(xe));
            acc += to_f64(c) * xv * y0.powi(*ye as i32);
        }
        Ok(acc)
    }

    /// `p(c * x^r, y)`: rescales and reparametrizes the x variable.
    pub fn substitute_x(&self, c: &Rational, r: &Rational) -> Result<Self> {
        let mut out = Self::zero();
        for ((xe, ye), k) in &self.terms {
            let f = pow_rat(c, xe)?;
            out.add_term(k * f, r * xe, *ye);
        }
        Ok(out)
    }
}

impl fmt::Display for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((xe, ye), c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut parts = Vec::new();
            if !mag.is_one() || (xe.is_zero() && *ye == 0) {
                parts.push(fmt_rat(&mag));
            }
            if !xe.is_zero() {
                if xe.is_one() {
                    parts.push("x".to_string());
                } else if is_integer(xe) && xe.is_positive() {
                    parts.push(format!("x^{}", xe.numer()));
                } else {
                    parts.push(format!("x^({})", fmt_rat(xe)));
                }
            }
            match *ye {
                0 => {}
                1 => parts.push("y".to_string()),
                k => parts.push(format!("y^{k}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add<&PuiseuxPoly> for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn add(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&PuiseuxPoly> for PuiseuxPoly {
    fn add_assign(&mut self, rhs: &PuiseuxPoly) {
        for ((xe, ye), c) in &rhs.terms {
            self.add_term(c.clone(), xe.clone(), *ye);
        }
    }
}

impl SubAssign<&PuiseuxPoly> for PuiseuxPoly {
    fn sub_assign(&mut self, rhs: &PuiseuxPoly) {
        for ((xe, ye), c) in &rhs.terms {
            self.add_term(-c.clone(), xe.clone(), *ye);
        }
    }
}

impl Sub<&PuiseuxPoly> for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn sub(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn neg(self) -> PuiseuxPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn neg(self) -> PuiseuxPoly {
        -&self
    }
}

impl Mul<&PuiseuxPoly> for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn mul(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        let mut out = PuiseuxPoly::zero();
        for ((xa, ya), ca) in &self.terms {
            for ((xb, yb), cb) in &rhs.terms {
                out.add_term(ca * cb, xa + xb, ya + yb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PuiseuxPoly> for PuiseuxPoly {
            type Output = PuiseuxPoly;
            fn $m(self, rhs: PuiseuxPoly) -> PuiseuxPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PuiseuxPoly> for PuiseuxPoly {
            type Output = PuiseuxPoly;
            fn $m(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<PuiseuxPoly> for &PuiseuxPoly {
            type Output = PuiseuxPoly;
            fn $m(self, rhs: PuiseuxPoly) -> PuiseuxPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<PuiseuxPoly> for PuiseuxPoly {
    fn add_assign(&mut self, rhs: PuiseuxPoly) {
        *self += &rhs;
    }
}

impl SubAssign<PuiseuxPoly> for PuiseuxPoly {
    fn sub_assign(&mut self, rhs: PuiseuxPoly) {
        *self -= &rhs;
    }
}

impl Zero for PuiseuxPoly {
    fn zero() -> Self {
        PuiseuxPoly::zero()
    }
    fn is_zero(&self) -> bool {
        PuiseuxPoly::is_zero(self)
    }
}

impl From<Rational> for PuiseuxPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

/// Shorthand for `c x^xe y^ye` with small integer data.
pub fn mono(cn: i64, cd: i64, xn: i64, xd: i64, ye: u32) -> PuiseuxPoly {
    use super::rational::rat;
    PuiseuxPoly::term(rat(cn, cd), rat(xn, xd), ye)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn x() -> PuiseuxPoly {
        PuiseuxPoly::x()
    }
    fn y() -> PuiseuxPoly {
        PuiseuxPoly::y()
    }

    #[test]
    fn ring_identities() {
        let p = (&x() + &y()) * (&x() - &y());
        assert_eq!(p, &x().pow(2) - &y().pow(2));
        let h = mono(1, 1, 1, 2, 0);
        assert_eq!(&h * &h, x());
        let q = mono(1, 1, 2, 1, 3).div_monomial(&int(1), &int(3), 0).unwrap();
        assert_eq!(q, mono(1, 1, -1, 1, 3));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivatives() {
        assert_eq!(mono(1, 1, 1, 2, 0).dx(), mono(1, 2, -1, 2, 0));
        assert_eq!(mono(1, 1, 2, 1, 3).dy(), mono(3, 1, 2, 1, 2));
        assert_eq!(mono(1, 1, -2, 1, 0).dx(), mono(-2, 1, -3, 1, 0));
        assert!(mono(1, 1, 3, 1, 0).dy().is_zero());
    }

    #[test]
    fn evaluation() {
        let p = mono(1, 1, 2, 1, 1);
        assert_eq!(p.eval_exact(&int(2), &int(3)).unwrap(), int(12));
        assert_eq!(
            mono(1, 1, 1, 2, 0).eval_exact(&int(4), &int(0)).unwrap(),
            int(2)
        );
        assert!(matches!(
            mono(1, 1, -1, 1, 0).eval_exact(&int(0), &int(1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            mono(1, 1, 1, 2, 0).eval_exact(&int(-4), &int(1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            mono(1, 1, 1, 2, 0).eval_exact(&int(0), &int(1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            mono(1, 1, 1, 2, 0).eval_exact(&int(2), &int(1)),
            Err(Error::Exactness(_))
        ));
        let v = mono(1, 1, 1, 2, 0).eval_f64(2.0, 0.0).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(mono(1, 1, 3, 1, 0).eval_f64(-2.0, 0.0).unwrap(), -8.0);
    }

    #[test]
    fn constants_and_monomials() {
        assert_eq!(PuiseuxPoly::zero().as_constant(), Some(int(0)));
        assert_eq!(PuiseuxPoly::constant(rat(3, 2)).as_constant(), Some(rat(3, 2)));
        assert_eq!(x().as_constant(), None);
        assert_eq!(x().as_monomial(), Some((int(1), int(1), 0)));
    }

    #[test]
    fn display() {
        let p = &mono(-3, 4, 2, 1, 0) + &mono(1, 1, -1, 2, 1);
        assert_eq!(p.to_string(), "x^(-1/2)*y - 3/4*x^2");
        assert_eq!(PuiseuxPoly::zero().to_string(), "0");
        assert_eq!(PuiseuxPoly::constant(int(-2)).to_string(), "-2");
    }
}
