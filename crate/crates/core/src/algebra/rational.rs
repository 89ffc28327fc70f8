//! Helpers around arbitrary precision rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// True when `q` lies in (1/2)Z.
pub fn is_half_integer(q: &Rational) -> bool {
    is_integer(&(q * int(2)))
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // very large parts: scale down by the bit length difference
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Best effort conversion of a finite float to the rational it represents exactly.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

fn exact_root(n: &BigInt, q: u32) -> Option<BigInt> {
    let r = n.nth_root(q);
    if num_traits::pow(r.clone(), q as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// `base^e` for an integer exponent. Zero to a negative power is a domain error.
pub fn pow_int(base: &Rational, e: &BigInt) -> Result<Rational> {
    if base.is_zero() {
        return if e.is_negative() {
            Err(Error::Domain("0 raised to a negative power".into()))
        } else if e.is_zero() {
            Ok(Rational::one())
        } else {
            Ok(Rational::zero())
        };
    }
    let k = e
        .abs()
        .to_u32()
        .ok_or_else(|| Error::Exactness(format!("exponent {e} too large")))?;
    let p = num_traits::pow(base.clone(), k as usize);
    Ok(if e.is_negative() { p.recip() } else { p })
}

/// Exact `base^e` for a rational exponent.
///
/// Negative bases only admit integer exponents; positive bases need perfect
/// q-th powers in numerator and denominator.
pub fn pow_rat(base: &Rational, e: &Rational) -> Result<Rational> {
    if is_integer(e) {
        return pow_int(base, e.numer());
    }
    if base.is_negative() {
        return Err(Error::Sign(format!("({base})^({e})")));
    }
    if base.is_zero() {
        return if e.is_negative() {
            Err(Error::Domain(format!("0^({e})")))
        } else {
            Ok(Rational::zero())
        };
    }
    let q = e
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Exactness(format!("root index {} too large", e.denom())))?;
    let rn = exact_root(base.numer(), q);
    let rd = exact_root(base.denom(), q);
    match (rn, rd) {
        (Some(n), Some(d)) => pow_int(&Rational::new(n, d), e.numer()),
        _ => Err(Error::Exactness(format!("({base})^({e}) is irrational"))),
    }
}

/// Compact text form, e.g. `-3/4` or `2`.
pub fn fmt_rat(q: &Rational) -> String {
    if is_integer(q) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_signed() {
        let q = rat(6, -8);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(4));
        assert_eq!(rat(0, 5), int(0));
        assert!(rat(0, 5).denom().is_one());
    }

    #[test]
    fn powers() {
        assert_eq!(pow_rat(&int(4), &rat(1, 2)).unwrap(), int(2));
        assert_eq!(pow_rat(&rat(8, 27), &rat(-2, 3)).unwrap(), rat(9, 4));
        assert_eq!(pow_rat(&int(-2), &int(3)).unwrap(), int(-8));
        assert_eq!(pow_rat(&int(-2), &int(-1)).unwrap(), rat(-1, 2));
        assert!(matches!(pow_rat(&int(-1), &rat(1, 3)), Err(Error::Sign(_))));
        assert!(matches!(pow_rat(&int(2), &rat(1, 2)), Err(Error::Exactness(_))));
        assert!(matches!(pow_rat(&int(0), &int(-1)), Err(Error::Domain(_))));
    }

    #[test]
    fn half_integers() {
        assert!(is_half_integer(&rat(5, 2)));
        assert!(is_half_integer(&int(3)));
        assert!(!is_half_integer(&rat(1, 3)));
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&rat(-3, 4)), -0.75);
        assert_eq!(from_f64(0.5).unwrap(), rat(1, 2));
    }
}
