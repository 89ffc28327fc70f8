//! Normal forms of quasihomogeneous connections, their Killing generators and
//! centralizers, and the parameter rescaling.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::rational::{fmt_rat, int, is_half_integer, is_integer, rat, to_f64};
use crate::algebra::{PuiseuxPoly, Rational, VectorField2};
use crate::connection::Connection;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    I,
    II0,
    II1,
    III,
    Flat,
    Example,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::I => "I",
            Family::II0 => "II0",
            Family::II1 => "II1",
            Family::III => "III",
            Family::Flat => "flat",
            Family::Example => "example",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Some(match s {
            "I" => Family::I,
            "II0" | "II" => Family::II0,
            "II1" => Family::II1,
            "III" => Family::III,
            "flat" => Family::Flat,
            "example" => Family::Example,
            _ => return None,
        })
    }

    fn is_type_ii(self) -> bool {
        matches!(self, Family::II0 | Family::II1)
    }
}

/// A point of the normal-form catalog.
///
/// For Type III only `gamma` and `epsilon` are meaningful and `phi` is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamClass {
    pub family: Family,
    pub n: Option<Rational>,
    pub gamma: Rational,
    pub phi: Rational,
    pub epsilon: Rational,
    pub basepoint: (Rational, Rational),
}

fn origin() -> (Rational, Rational) {
    (Rational::zero(), Rational::zero())
}

impl ParamClass {
    pub fn type_i(n: Rational, gamma: Rational, phi: Rational, epsilon: Rational) -> Self {
        Self { family: Family::I, n: Some(n), gamma, phi, epsilon, basepoint: origin() }
    }

    pub fn type_ii0(n: Rational, gamma: Rational, phi: Rational, epsilon: Rational) -> Self {
        Self { family: Family::II0, n: Some(n), gamma, phi, epsilon, basepoint: origin() }
    }

    pub fn type_ii1(n: Rational, gamma: Rational, phi: Rational, epsilon: Rational) -> Self {
        Self {
            family: Family::II1,
            n: Some(n),
            gamma,
            phi,
            epsilon,
            basepoint: (Rational::zero(), Rational::one()),
        }
    }

    pub fn type_iii(gamma: Rational, epsilon: Rational) -> Self {
        Self {
            family: Family::III,
            n: None,
            gamma,
            phi: Rational::zero(),
            epsilon,
            basepoint: origin(),
        }
    }

    pub fn flat() -> Self {
        Self {
            family: Family::Flat,
            n: None,
            gamma: Rational::zero(),
            phi: Rational::zero(),
            epsilon: Rational::zero(),
            basepoint: origin(),
        }
    }

    /// Type I(2) with `(γ, φ, ε) = (3/4, -3/4, -3/4)`.
    pub fn example() -> Self {
        Self {
            family: Family::Example,
            n: Some(int(2)),
            gamma: rat(3, 4),
            phi: rat(-3, 4),
            epsilon: rat(-3, 4),
            basepoint: origin(),
        }
    }

    /// Checks the admissible ranges of `n` and the parameters.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(format!("{}: {m}", self.family.name())));
        match self.family {
            Family::Flat => Ok(()),
            Family::Example => {
                if *self != Self::example() {
                    return bad("the example has fixed parameters");
                }
                Ok(())
            }
            Family::III => {
                if self.n.is_some() {
                    return bad("n is not a parameter of Type III");
                }
                if !self.phi.is_zero() {
                    return bad("phi is not a parameter of Type III");
                }
                if self.gamma.is_zero() && self.epsilon.is_zero() {
                    return bad("(gamma, epsilon) must not both vanish");
                }
                Ok(())
            }
            Family::I | Family::II0 | Family::II1 => {
                let Some(n) = &self.n else {
                    return bad("n is required");
                };
                if !is_half_integer(n) {
                    return bad("n must lie in (1/2)Z");
                }
                if self.family == Family::I && *n < rat(1, 2) {
                    return bad("n must be at least 1/2");
                }
                if self.family.is_type_ii() && *n < rat(5, 2) && *n != int(2) {
                    return bad("n must be at least 5/2");
                }
                if !is_integer(n) && !(self.gamma.is_zero() && self.phi.is_zero()) {
                    return bad("gamma and phi must vanish when n is not an integer");
                }
                if self.gamma.is_zero() && self.phi.is_zero() && self.epsilon.is_zero() {
                    return bad("(gamma, phi, epsilon) must not all vanish");
                }
                Ok(())
            }
        }
    }

    /// Parameters that are accepted but outside the quasihomogeneous list:
    /// the locally homogeneous Type I(1, γ, -γ, -γ²) and Type II with n = 2.
    pub fn is_exceptional(&self) -> bool {
        match (self.family, &self.n) {
            (Family::I, Some(n)) => {
                n.is_one() && self.phi == -&self.gamma && self.epsilon == -(&self.gamma * &self.gamma)
            }
            (Family::II0 | Family::II1, Some(n)) => *n == int(2),
            _ => false,
        }
    }

    /// The example as a plain Type I point; other classes unchanged.
    pub fn as_plain(&self) -> ParamClass {
        if self.family == Family::Example {
            let mut p = self.clone();
            p.family = Family::I;
            p
        } else {
            self.clone()
        }
    }

    pub fn label(&self) -> String {
        match self.family {
            Family::Flat => "flat".into(),
            Family::Example => "example".into(),
            Family::III => format!(
                "III(gamma={}, epsilon={})",
                fmt_rat(&self.gamma),
                fmt_rat(&self.epsilon)
            ),
            f => format!(
                "{}({}; gamma={}, phi={}, epsilon={})",
                f.name(),
                self.n.as_ref().map(fmt_rat).unwrap_or_default(),
                fmt_rat(&self.gamma),
                fmt_rat(&self.phi),
                fmt_rat(&self.epsilon)
            ),
        }
    }
}

impl fmt::Display for ParamClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn t(c: Rational, xe: Rational, ye: u32) -> PuiseuxPoly {
    PuiseuxPoly::term(c, xe, ye)
}

fn type_i_symbols(n: &Rational, g: &Rational, p: &Rational, e: &Rational) -> [PuiseuxPoly; 6] {
    let z = PuiseuxPoly::zero;
    [
        z(),
        z(),
        t(-g, n.clone(), 0),
        z(),
        t(-(e / n), int(2) * n + int(1), 0),
        t(-p, n.clone(), 0),
    ]
}

fn type_ii_symbols(n: &Rational, g: &Rational, p: &Rational, e: &Rational) -> [PuiseuxPoly; 6] {
    let en = e / n;
    let two_n = int(2) * n;
    let two = int(2);
    [
        t(-&en, &two_n - int(3), 2) + t(&two * g, n - int(2), 1),
        t(-&en, &two_n - int(4), 3) + t(&two * g - p, n - int(3), 2),
        t(en.clone(), &two_n - int(2), 1) + t(-g, n - int(1), 0),
        t(en.clone(), &two_n - int(3), 2) + t(p - g, n - int(2), 1),
        t(-&en, &two_n - int(1), 0),
        t(-&en, &two_n - int(2), 1) + t(-p, n - int(1), 0),
    ]
}

fn type_iii_symbols(g: &Rational, e: &Rational) -> [PuiseuxPoly; 6] {
    let h = e * rat(1, 2);
    let two = int(2);
    [
        t(-&h, int(1), 2) + t(&two * g, int(0), 1),
        t(-&h, int(0), 3),
        t(h.clone(), int(2), 1) + t(-g, int(1), 0),
        t(h.clone(), int(1), 2) + t(g.clone(), int(0), 1),
        t(-&h, int(3), 0),
        t(-&h, int(2), 1) + t(-(&two * g), int(1), 0),
    ]
}

/// Christoffel symbols of the normal form.
pub fn make_normal_form(p: &ParamClass) -> Result<Connection> {
    p.validate()?;
    let conn = match p.family {
        Family::Flat => return Ok(Connection::flat()),
        Family::Example => return Ok(make_example_torus()),
        Family::I => Connection::from_symbols(type_i_symbols(
            p.n.as_ref().unwrap(),
            &p.gamma,
            &p.phi,
            &p.epsilon,
        )),
        Family::II0 | Family::II1 => Connection::from_symbols(type_ii_symbols(
            p.n.as_ref().unwrap(),
            &p.gamma,
            &p.phi,
            &p.epsilon,
        )),
        Family::III => Connection::from_symbols(type_iii_symbols(&p.gamma, &p.epsilon)),
    };
    Ok(conn.tagged(p.label()))
}

/// Type I(2) with `(γ, φ, ε) = (3/4, -3/4, -3/4)`.
pub fn make_example_torus() -> Connection {
    Connection::from_symbols(type_i_symbols(&int(2), &rat(3, 4), &rat(-3, 4), &rat(-3, 4)))
        .tagged("example")
}

/// Commuting fields `A = x/2 ∂x - y∂y`, `Z = x/2 ∂x + x^(-2) ∂y` and the first
/// integral `h = x²y` attached to the example torus connection.
pub fn example_frame() -> (VectorField2, VectorField2, PuiseuxPoly) {
    let half_x = PuiseuxPoly::term(rat(1, 2), int(1), 0);
    let a = VectorField2::new(half_x.clone(), -PuiseuxPoly::y());
    let z = VectorField2::new(half_x, t(Rational::one(), int(-2), 0));
    (a, z, t(Rational::one(), int(2), 1))
}

/// One exact frame identity and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameRelation {
    pub name: &'static str,
    pub holds: bool,
}

/// The three stated frame identities of the example torus connection:
/// `∇_A Z = 3/4 A - Z`, `∇_Z Z = -1/4 Z` and
/// `∇_A A = 3/4 (h²+2h) A + (1/4 - 3/8 (h²+2h)) Z`.
pub fn example_stated_relations(conn: &Connection) -> Vec<FrameRelation> {
    let (a, z, h) = example_frame();
    let q = &h * &h + h.scale(&int(2));
    let az = &a.scale(&rat(3, 4)) - &z;
    let zz = z.scale(&rat(-1, 4));
    let aa = &a.mul_poly(&q.scale(&rat(3, 4)))
        + &z.mul_poly(&(PuiseuxPoly::constant(rat(1, 4)) - q.scale(&rat(3, 8))));
    vec![
        FrameRelation {
            name: "nabla_A Z = 3/4 A - Z",
            holds: conn.covariant_derivative(&a, &z) == az,
        },
        FrameRelation {
            name: "nabla_Z Z = -1/4 Z",
            holds: conn.covariant_derivative(&z, &z) == zz,
        },
        FrameRelation {
            name: "nabla_A A = 3/4 (h^2+2h) A + (1/4 - 3/8 (h^2+2h)) Z",
            holds: conn.covariant_derivative(&a, &a) == aa,
        },
    ]
}

/// `∇_A A = 1/2 A + 3/4 (h²+2h) Z`, the form the third identity takes for
/// the example torus connection.
pub fn example_self_derivative_holds(conn: &Connection) -> bool {
    let (a, z, h) = example_frame();
    let q = &h * &h + h.scale(&int(2));
    conn.covariant_derivative(&a, &a) == &a.scale(&rat(1, 2)) + &z.mul_poly(&q.scale(&rat(3, 4)))
}

/// Killing generators and the fields commuting with them on `x > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub killing: Vec<VectorField2>,
    pub centralizer: Vec<VectorField2>,
}

fn vf(cx: PuiseuxPoly, cy: PuiseuxPoly) -> VectorField2 {
    VectorField2::new(cx, cy)
}

pub fn generators(p: &ParamClass) -> Result<GeneratorSet> {
    p.validate()?;
    let x = PuiseuxPoly::x;
    let y = PuiseuxPoly::y;
    let zero = PuiseuxPoly::zero;
    Ok(match p.family {
        Family::I | Family::Example => {
            let n = p.n.as_ref().unwrap();
            let inv = n.recip();
            GeneratorSet {
                killing: vec![vf(x().scale(&inv), -y()), VectorField2::dy()],
                centralizer: vec![
                    vf(x().scale(&-&inv), zero()),
                    vf(zero(), t(-Rational::one(), -n.clone(), 0)),
                ],
            }
        }
        Family::II0 | Family::II1 => {
            let n = p.n.as_ref().unwrap();
            let inv = n.recip();
            GeneratorSet {
                killing: vec![
                    vf(x().scale(&inv), y().scale(&((Rational::one() - n) * &inv))),
                    vf(zero(), x()),
                ],
                centralizer: vec![
                    vf(x().scale(&-&inv), y().scale(&-&inv)),
                    vf(zero(), t(-Rational::one(), Rational::one() - n, 0)),
                ],
            }
        }
        Family::III => GeneratorSet {
            killing: vec![vf(zero(), x()), vf(y(), zero()), vf(x(), -y())],
            centralizer: vec![vf(x(), y())],
        },
        Family::Flat => GeneratorSet {
            killing: vec![
                VectorField2::dx(),
                VectorField2::dy(),
                vf(x(), zero()),
                vf(y(), zero()),
                vf(zero(), x()),
                vf(zero(), y()),
            ],
            centralizer: vec![],
        },
    })
}

/// `2(xy + 1/γ)∂x - y²∂y` for the locally homogeneous Type I(1, γ, -γ, -γ²).
pub fn exceptional_killing_field(p: &ParamClass) -> Option<VectorField2> {
    if p.family != Family::I || !p.is_exceptional() || p.gamma.is_zero() {
        return None;
    }
    let cx = (&PuiseuxPoly::x() * &PuiseuxPoly::y() + PuiseuxPoly::constant(p.gamma.recip()))
        .scale(&int(2));
    Some(vf(cx, -PuiseuxPoly::y().pow(2)))
}

/// `(γ, φ, ε) ↦ (μγ, μφ, μ²ε)`.
pub fn scale_params(p: &ParamClass, mu: &Rational) -> Result<ParamClass> {
    if mu.is_zero() {
        return Err(Error::InvalidScale("mu must be nonzero".into()));
    }
    let p = p.as_plain();
    match p.family {
        Family::Flat => return Err(Error::InvalidParams("flat has no parameters".into())),
        Family::II1 if mu.is_negative() => {
            return Err(Error::InvalidScale("Type II1 only admits mu > 0".into()))
        }
        _ => {}
    }
    p.validate()?;
    let mut q = p.clone();
    q.gamma = mu * &p.gamma;
    q.phi = mu * &p.phi;
    q.epsilon = mu * mu * &p.epsilon;
    Ok(q)
}

/// `mu = sign * sqrt(square)`; covers the irrational scalings that normalize ε alone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MuFactor {
    pub sign: i8,
    pub square: Rational,
}

impl MuFactor {
    fn from_rational(mu: Rational) -> Self {
        let sign = if mu.is_negative() { -1 } else { 1 };
        Self { sign, square: &mu * &mu }
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * to_f64(&self.square).sqrt()
    }

    /// Exact value when `square` is a perfect square.
    pub fn as_rational(&self) -> Option<Rational> {
        crate::algebra::rational::pow_rat(&self.square, &rat(1, 2))
            .ok()
            .map(|r| if self.sign < 0 { -r } else { r })
    }
}

impl fmt::Display for MuFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", fmt_rat(&r)),
            None => write!(
                f,
                "{}sqrt({})",
                if self.sign < 0 { "-" } else { "" },
                fmt_rat(&self.square)
            ),
        }
    }
}

/// Canonical representative of the rescaling orbit and the scaling used.
///
/// The first nonzero of `(γ, φ)` becomes 1 (or ±1 for Type II1, which only
/// admits μ > 0); otherwise ε becomes ±1.
pub fn canonicalize(p: &ParamClass) -> Result<(ParamClass, MuFactor)> {
    let p = p.as_plain();
    p.validate()?;
    if p.family == Family::Flat {
        return Err(Error::InvalidParams("flat has no parameters".into()));
    }
    let positive_only = p.family == Family::II1;
    let lead = if !p.gamma.is_zero() {
        Some(p.gamma.clone())
    } else if !p.phi.is_zero() {
        Some(p.phi.clone())
    } else {
        None
    };
    match lead {
        Some(l) => {
            let mu = if positive_only { l.abs().recip() } else { l.recip() };
            Ok((scale_params(&p, &mu)?, MuFactor::from_rational(mu)))
        }
        None => {
            let mut q = p.clone();
            q.epsilon = p.epsilon.signum();
            let mu = MuFactor { sign: 1, square: p.epsilon.abs().recip() };
            Ok((q, mu))
        }
    }
}

/// True when some admissible μ maps `p` onto `q`.
pub fn equivalent_params(p: &ParamClass, q: &ParamClass) -> Result<bool> {
    let (p, q) = (p.as_plain(), q.as_plain());
    if p.family != q.family {
        return Err(Error::FamilyMismatch(format!(
            "{} vs {}",
            p.family.name(),
            q.family.name()
        )));
    }
    if p.n != q.n {
        return Err(Error::FamilyMismatch(format!(
            "n = {} vs n = {}",
            p.n.as_ref().map(fmt_rat).unwrap_or_default(),
            q.n.as_ref().map(fmt_rat).unwrap_or_default()
        )));
    }
    if p.family == Family::Flat {
        return Ok(true);
    }
    Ok(canonicalize(&p)?.0 == canonicalize(&q)?.0)
}

/// Nonzero curvature whose every term carries a positive power of x at least 1.
pub fn curvature_locus_is_axis(conn: &Connection) -> bool {
    let r = conn.curvature();
    !r.is_zero()
        && r
            .components()
            .iter()
            .all(|p| p.terms().all(|(_, xe, _)| *xe >= Rational::one()))
}

/// Reads `(γ, φ, ε)` off a connection whose symbols have the Type I or II shape
/// for the given `n`. The result is validated.
pub fn identify_params(conn: &Connection, family: Family, n: &Rational) -> Result<ParamClass> {
    let shape: fn(&Rational, &Rational, &Rational, &Rational) -> [PuiseuxPoly; 6] = match family {
        Family::I => type_i_symbols,
        Family::II0 | Family::II1 => type_ii_symbols,
        f => {
            return Err(Error::FamilyMismatch(format!(
                "{} has no (gamma, phi, epsilon) shape",
                f.name()
            )))
        }
    };
    let (o, z) = (Rational::one(), Rational::zero());
    let basis = [
        shape(n, &o, &z, &z),
        shape(n, &z, &o, &z),
        shape(n, &z, &z, &o),
    ];
    let mut keys = std::collections::BTreeSet::new();
    for sym in basis.iter().chain(std::iter::once(conn.symbols())) {
        for (slot, p) in sym.iter().enumerate() {
            for (_, xe, ye) in p.terms() {
                keys.insert((slot, xe.clone(), ye));
            }
        }
    }
    let coeff = |sym: &[PuiseuxPoly; 6], (slot, xe, ye): &(usize, Rational, u32)| sym[*slot].coeff(xe, *ye);
    let cols: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| keys.iter().map(|k| coeff(b, k)).collect())
        .collect();
    let rhs: Vec<Rational> = keys.iter().map(|k| coeff(conn.symbols(), k)).collect();
    let v = crate::algebra::linalg::solve_columns(&cols, &rhs).ok_or_else(|| {
        Error::FamilyMismatch(format!("symbols are not of Type {}({})", family.name(), fmt_rat(n)))
    })?;
    let [gamma, phi, epsilon]: [Rational; 3] = v.try_into().expect("three unknowns");
    let p = match family {
        Family::I => ParamClass::type_i(n.clone(), gamma, phi, epsilon),
        Family::II0 => ParamClass::type_ii0(n.clone(), gamma, phi, epsilon),
        _ => ParamClass::type_ii1(n.clone(), gamma, phi, epsilon),
    };
    p.validate()?;
    Ok(p)
}

/// Recovers Type III parameters from a connection with Type III symbols.
pub fn type_iii_params(conn: &Connection) -> Option<(Rational, Rational)> {
    let gamma = -conn.c().coeff(&int(1), 0);
    let epsilon = conn.e().coeff(&int(3), 0) * int(-2);
    let candidate = Connection::from_symbols(type_iii_symbols(&gamma, &epsilon));
    candidate.same_symbols(conn).then_some((gamma, epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::mono;
    use crate::killing::{is_killing, structure_constants};

    fn i(n: Rational, g: i64, p: i64, e: i64) -> ParamClass {
        ParamClass::type_i(n, int(g), int(p), int(e))
    }

    #[test]
    fn example_symbols() {
        let c = make_normal_form(&ParamClass::type_i(int(2), rat(3, 4), rat(-3, 4), rat(-3, 4)))
            .unwrap();
        assert!(c.a().is_zero() && c.b().is_zero() && c.d().is_zero());
        assert_eq!(*c.c(), mono(-3, 4, 2, 1, 0));
        assert_eq!(*c.e(), mono(3, 8, 5, 1, 0));
        assert_eq!(*c.f(), mono(3, 4, 2, 1, 0));
        assert!(make_example_torus().same_symbols(&c));
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(
            make_normal_form(&ParamClass::type_i(rat(1, 2), int(1), int(0), int(1))),
            Err(Error::InvalidParams(_))
        ));
        assert!(make_normal_form(&i(int(2), 0, 0, 0)).is_err());
        assert!(make_normal_form(&ParamClass::type_ii0(int(1), int(1), int(0), int(0))).is_err());
        assert!(make_normal_form(&ParamClass::type_iii(int(0), int(0))).is_err());
        assert!(make_normal_form(&ParamClass::flat()).unwrap().is_flat_symbols());
        assert!(ParamClass::type_ii0(int(2), int(1), int(0), int(0)).is_exceptional());
        assert!(i(int(1), 2, -2, -4).is_exceptional());
    }

    #[test]
    fn type_iii_is_type_ii_two() {
        let (g, e) = (rat(2, 3), rat(-5, 7));
        let iii = make_normal_form(&ParamClass::type_iii(g.clone(), e.clone())).unwrap();
        let ii = make_normal_form(&ParamClass::type_ii0(int(2), g.clone(), &g * int(2), e.clone()))
            .unwrap();
        assert!(iii.same_symbols(&ii));
        assert_eq!(type_iii_params(&iii), Some((g, e)));
    }

    #[test]
    fn table_generators() {
        let gs = generators(&i(int(2), 1, 0, 2)).unwrap();
        let c = structure_constants(&gs.killing).unwrap();
        assert_eq!(c[0][1], vec![int(0), int(1)]);
        let c = structure_constants(&gs.centralizer).unwrap();
        assert_eq!(c[0][1], vec![int(0), int(1)]);
        let gs = generators(&ParamClass::type_ii0(int(3), int(1), int(1), int(1))).unwrap();
        assert!(gs.centralizer[0].bracket(&gs.killing[0]).is_zero());
        let gs = generators(&ParamClass::type_iii(int(1), int(1))).unwrap();
        assert!(structure_constants(&gs.killing).is_ok());
    }

    #[test]
    fn exceptional_field() {
        for g in [1, 2, -3] {
            let p = i(int(1), g, -g, -g * g);
            let v = exceptional_killing_field(&p).unwrap();
            assert!(is_killing(&make_normal_form(&p).unwrap(), &v));
        }
        assert!(exceptional_killing_field(&i(int(1), 1, 1, 1)).is_none());
    }

    #[test]
    fn scaling() {
        let q = scale_params(&i(int(2), 1, 0, 2), &rat(1, 2)).unwrap();
        assert_eq!((q.gamma, q.phi, q.epsilon), (rat(1, 2), int(0), rat(1, 2)));
        let ii1 = ParamClass::type_ii1(int(3), int(1), int(1), int(1));
        assert!(matches!(scale_params(&ii1, &int(-1)), Err(Error::InvalidScale(_))));
        let q = scale_params(&ParamClass::type_iii(int(1), int(4)), &int(-1)).unwrap();
        assert_eq!((q.gamma, q.epsilon), (int(-1), int(4)));
    }

    #[test]
    fn equivalence() {
        assert!(equivalent_params(&i(int(2), 1, 0, 2), &i(int(2), 2, 0, 8)).unwrap());
        assert!(!equivalent_params(&i(int(2), 1, 0, 2), &i(int(2), 1, 0, 3)).unwrap());
        let h = rat(1, 2);
        assert!(!equivalent_params(&i(h.clone(), 0, 0, 1), &i(h.clone(), 0, 0, -1)).unwrap());
        assert!(equivalent_params(&i(h.clone(), 0, 0, 2), &i(h, 0, 0, 3)).unwrap());
        assert!(matches!(
            equivalent_params(&i(int(2), 1, 0, 2), &i(int(3), 1, 0, 2)),
            Err(Error::FamilyMismatch(_))
        ));
        let (c, mu) = canonicalize(&i(rat(5, 2), 0, 0, 2)).unwrap();
        assert_eq!(c.epsilon, int(1));
        assert_eq!(mu.as_rational(), None);
        assert!((mu.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
        let ii1 = ParamClass::type_ii1(int(3), int(-2), int(1), int(1));
        let (c, mu) = canonicalize(&ii1).unwrap();
        assert_eq!(c.gamma, int(-1));
        assert_eq!(mu.as_rational(), Some(rat(1, 2)));
    }

    #[test]
    fn curvature_locus() {
        assert!(curvature_locus_is_axis(&make_example_torus()));
        assert!(!curvature_locus_is_axis(&Connection::flat()));
        let c = make_normal_form(&ParamClass::type_ii0(int(3), int(0), int(0), int(1))).unwrap();
        assert!(curvature_locus_is_axis(&c));
    }

    #[test]
    fn identify_round_trip() {
        for p in [
            ParamClass::type_i(int(3), rat(1, 2), int(-1), int(2)),
            ParamClass::type_ii1(int(3), int(1), int(0), rat(-3, 2)),
        ] {
            let conn = make_normal_form(&p).unwrap();
            assert_eq!(identify_params(&conn, p.family, p.n.as_ref().unwrap()).unwrap(), p);
        }
        let conn = make_normal_form(&ParamClass::type_i(int(2), int(1), int(1), int(1))).unwrap();
        assert!(matches!(
            identify_params(&conn, Family::II0, &int(3)),
            Err(Error::FamilyMismatch(_))
        ));
    }

    #[test]
    fn example_relations() {
        let conn = make_example_torus();
        let r = example_stated_relations(&conn);
        assert!(r[0].holds && r[1].holds);
        // the third stated identity does not hold; its corrected form does
        assert!(!r[2].holds);
        assert!(example_self_derivative_holds(&conn));
    }
}
