//! Left-invariant connections on the affine group of the line and their
//! markings.
//!
//! In the left-invariant frame `(X0, Y0)` with `[X0, Y0] = Y0`:
//! `∇_{X0}X0 = αX0 + βY0`, `∇_{X0}Y0 = γX0 + δY0`,
//! `∇_{Y0}X0 = γX0 + (δ - 1)Y0`, `∇_{Y0}Y0 = εX0 + φY0`.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::rational::{fmt_rat, from_f64, int, is_half_integer, to_f64};
use crate::algebra::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeftInvariantConnection {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
    pub phi: Rational,
}

impl LeftInvariantConnection {
    pub fn new(v: [Rational; 6]) -> Self {
        let [alpha, beta, gamma, delta, epsilon, phi] = v;
        Self { alpha, beta, gamma, delta, epsilon, phi }
    }

    pub fn to_array(&self) -> [Rational; 6] {
        [
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            self.delta.clone(),
            self.epsilon.clone(),
            self.phi.clone(),
        ]
    }

    /// Coefficients `[c0, c1, c2, c3]` of
    /// `β + (2δ - α - 1)λ + (φ - 2γ)λ² - ελ³`, whose roots are the markings.
    pub fn marking_cubic(&self) -> [Rational; 4] {
        [
            self.beta.clone(),
            int(2) * &self.delta - &self.alpha - int(1),
            &self.phi - int(2) * &self.gamma,
            -self.epsilon.clone(),
        ]
    }

    /// `(α(∇,Z), δ(∇,Z))` for `Z = X0 + λY0`.
    pub fn marking_invariants(&self, lambda: &Rational) -> (Rational, Rational) {
        let l2 = lambda * lambda;
        (
            &self.alpha + int(2) * lambda * &self.gamma + &self.epsilon * &l2,
            &self.delta + (&self.phi - &self.gamma) * lambda - &self.epsilon * &l2,
        )
    }
}

impl fmt::Display for LeftInvariantConnection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(alpha={}, beta={}, gamma={}, delta={}, epsilon={}, phi={})",
            fmt_rat(&self.alpha),
            fmt_rat(&self.beta),
            fmt_rat(&self.gamma),
            fmt_rat(&self.delta),
            fmt_rat(&self.epsilon),
            fmt_rat(&self.phi)
        )
    }
}

/// Coefficients in the frame `(X, Y) = (X0 + λY0, μY0)`.
pub fn act_automorphism(
    l: &LeftInvariantConnection,
    lambda: &Rational,
    mu: &Rational,
) -> Result<LeftInvariantConnection> {
    if mu.is_zero() {
        return Err(Error::InvalidScale("mu must be nonzero".into()));
    }
    let l2 = lambda * lambda;
    let l3 = &l2 * lambda;
    let cubic = &l.beta + (int(2) * &l.delta - &l.alpha - int(1)) * lambda
        + (&l.phi - int(2) * &l.gamma) * &l2
        - &l.epsilon * &l3;
    let (alpha, delta) = l.marking_invariants(lambda);
    Ok(LeftInvariantConnection {
        alpha,
        beta: cubic / mu,
        gamma: mu * (&l.gamma + lambda * &l.epsilon),
        delta,
        epsilon: mu * mu * &l.epsilon,
        phi: mu * (&l.phi - lambda * &l.epsilon),
    })
}

/// Composite of acting by `(λ1, μ1)` and then by `(λ2, μ2)`.
pub fn compose_automorphisms(
    first: (&Rational, &Rational),
    second: (&Rational, &Rational),
) -> (Rational, Rational) {
    (first.0 + first.1 * second.0, first.1 * second.1)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(Rational),
    Approx(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(q) => to_f64(q),
            Number::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(q) => Some(q),
            Number::Approx(_) => None,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(q) => write!(f, "{}", fmt_rat(q)),
            Number::Approx(v) => write!(f, "~{v:.15e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MarkingKind {
    I0,
    II0,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MarkingType {
    I0 { n: Rational, special: bool },
    II0 { n: Rational, special: bool },
    Neither,
}

impl MarkingType {
    pub fn is_special(&self) -> bool {
        matches!(
            self,
            MarkingType::I0 { special: true, .. } | MarkingType::II0 { special: true, .. }
        )
    }
}

impl fmt::Display for MarkingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, n, special) = match self {
            MarkingType::I0 { n, special } => ("I0", n, special),
            MarkingType::II0 { n, special } => ("II0", n, special),
            MarkingType::Neither => return write!(f, "neither"),
        };
        write!(f, "{name}({})", fmt_rat(n))?;
        if *special {
            write!(f, " special")?;
        }
        Ok(())
    }
}

/// Type of a marking from its invariants.
pub fn classify_marking(alpha_m: &Rational, delta_m: &Rational) -> MarkingType {
    if alpha_m.is_zero() {
        return MarkingType::Neither;
    }
    let n = -alpha_m.recip();
    let special = is_half_integer(&n) && n >= Rational::one();
    if delta_m.is_one() {
        MarkingType::I0 { n, special }
    } else if *delta_m == Rational::one() + alpha_m {
        MarkingType::II0 { n, special }
    } else {
        MarkingType::Neither
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Marking {
    /// The marking is `X0 + λY0`.
    pub lambda: Number,
    pub alpha_m: Number,
    pub delta_m: Number,
    pub kind: MarkingType,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkingReport {
    pub markings: Vec<Marking>,
}

impl MarkingReport {
    pub fn exact_lambdas(&self) -> Vec<Rational> {
        self.markings
            .iter()
            .filter_map(|m| m.lambda.exact().cloned())
            .collect()
    }

    pub fn special_count(&self) -> usize {
        self.markings.iter().filter(|m| m.kind.is_special()).count()
    }
}

// ---- univariate polynomials over Q, ascending coefficients ----

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn peval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn pderiv(p: &[Rational]) -> Vec<Rational> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * int(i as i64))
            .collect(),
    )
}

fn pdivrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], trim(r));
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    let lead = b[db].clone();
    for i in (0..q.len()).rev() {
        let f = &r[i + db] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &f * bj;
        }
        q[i] = f;
    }
    (trim(q), trim(r))
}

fn pgcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = pdivrem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Primitive integer multiple of `p`, ascending, with positive leading coefficient.
fn primitive_ints(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let g = if ints.last().unwrap().is_negative() { -g } else { g };
    ints.into_iter().map(|c| c / &g).collect()
}

fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_in(&-hi, &-lo);
    }
    let c = lo.ceil();
    if c <= *hi {
        return c;
    }
    let fl = lo.floor();
    fl.clone() + simplest_in(&(hi - &fl).recip(), &(lo - &fl).recip()).recip()
}

fn real_critical_points(d: &[Rational]) -> Vec<f64> {
    match d.len() {
        2 => vec![-to_f64(&d[0]) / to_f64(&d[1])],
        3 => {
            let (c, b, a) = (to_f64(&d[0]), to_f64(&d[1]), to_f64(&d[2]));
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                vec![]
            } else {
                let s = disc.sqrt();
                let q = -0.5 * (b + if b >= 0.0 { s } else { -s });
                let mut v = vec![q / a];
                if q != 0.0 {
                    v.push(c / q);
                } else {
                    v.push(-b / (2.0 * a));
                }
                v
            }
        }
        _ => vec![],
    }
}

/// Distinct real roots of a nonzero polynomial of degree at most 3.
///
/// Bisection runs on the grid `m / 2^k` with integer arithmetic. The final
/// cell is narrower than `1/(2 l^2)`, `l` the leading coefficient of the
/// primitive integer polynomial, so a rational root is the simplest rational
/// in its cell.
fn real_roots(p: &[Rational]) -> Vec<Number> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return vec![];
    }
    let g = pgcd(&p, &pderiv(&p));
    let sqf = if g.len() > 1 { pdivrem(&p, &g).0 } else { p };
    let ints = primitive_ints(&sqf);
    let deg = ints.len() - 1;
    let lead = ints[deg].clone();
    let k = (BigInt::from(2) * &lead * &lead).bits().max(54) as usize;
    // coefficients of 2^(k deg) P(m / 2^k) as a polynomial in m
    let scaled: Vec<BigInt> = ints.iter().enumerate().map(|(i, c)| c << (k * (deg - i))).collect();
    let eval = |m: &BigInt| -> i8 {
        let v = scaled.iter().rev().fold(BigInt::zero(), |acc, c| acc * m + c);
        match v.sign() {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::NoSign => 0,
        }
    };
    let scale = Rational::from_integer(BigInt::one() << k);
    let to_grid = |q: &Rational| (q * &scale).round().to_integer();
    let from_grid = |m: &BigInt| Rational::from_integer(m.clone()) / &scale;
    let bound = Rational::one()
        + ints[..deg]
            .iter()
            .map(|c| Rational::new(c.abs(), lead.clone()))
            .max()
            .unwrap_or_else(Rational::zero);
    let top = to_grid(&bound.ceil());

    let mut cuts = vec![-top.clone()];
    let mut crit: Vec<BigInt> = real_critical_points(&pderiv(&sqf))
        .into_iter()
        .filter(|v| v.is_finite())
        .filter_map(from_f64)
        .map(|c| to_grid(&c))
        .filter(|m| *m > -top.clone() && *m < top)
        .collect();
    crit.sort();
    crit.dedup();
    cuts.extend(crit);
    cuts.push(top);

    let mut roots = Vec::new();
    for c in &cuts {
        if eval(c) == 0 {
            roots.push(Number::Exact(from_grid(c)));
        }
    }
    for w in cuts.windows(2) {
        let (mut lo, mut hi) = (w[0].clone(), w[1].clone());
        let (slo, shi) = (eval(&lo), eval(&hi));
        if slo == 0 || shi == 0 || slo == shi {
            continue;
        }
        let mut exact = None;
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1usize;
            let sm = eval(&mid);
            if sm == 0 {
                exact = Some(from_grid(&mid));
                break;
            }
            if sm == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = match exact {
            Some(r) => Number::Exact(r),
            None => {
                let (a, b) = (from_grid(&lo), from_grid(&hi));
                let cand = simplest_in(&a, &b);
                if peval(&sqf, &cand).is_zero() {
                    Number::Exact(cand)
                } else {
                    Number::Approx(to_f64(&((a + b) / int(2))))
                }
            }
        };
        roots.push(root);
    }
    roots.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
    roots
}

/// Markings `X0 + λY0` with their invariants and types, sorted by λ.
pub fn find_markings(l: &LeftInvariantConnection) -> Result<MarkingReport> {
    let cubic = l.marking_cubic();
    if cubic.iter().all(|c| c.is_zero()) {
        return Err(Error::DegenerateCubic);
    }
    let markings = real_roots(&cubic)
        .into_iter()
        .map(|root| match root {
            Number::Exact(lam) => {
                let (a, d) = l.marking_invariants(&lam);
                let kind = classify_marking(&a, &d);
                Marking {
                    lambda: Number::Exact(lam),
                    alpha_m: Number::Exact(a),
                    delta_m: Number::Exact(d),
                    kind,
                }
            }
            Number::Approx(v) => {
                let (a, g, d, e, f) = (
                    to_f64(&l.alpha),
                    to_f64(&l.gamma),
                    to_f64(&l.delta),
                    to_f64(&l.epsilon),
                    to_f64(&l.phi),
                );
                Marking {
                    lambda: Number::Approx(v),
                    alpha_m: Number::Approx(a + 2.0 * v * g + e * v * v),
                    delta_m: Number::Approx(d + (f - g) * v - e * v * v),
                    kind: MarkingType::Neither,
                }
            }
        })
        .collect();
    Ok(MarkingReport { markings })
}

fn marking_data(kind: MarkingKind, n: &Rational) -> Result<(Rational, Rational)> {
    if n.is_zero() {
        return Err(Error::Inconsistent("n must be nonzero".into()));
    }
    let alpha = -n.recip();
    let delta = match kind {
        MarkingKind::I0 => Rational::one(),
        MarkingKind::II0 => Rational::one() + &alpha,
    };
    Ok((alpha, delta))
}

fn expected_type(kind: MarkingKind, n: &Rational) -> MarkingType {
    let special = is_half_integer(n) && *n >= Rational::one();
    match kind {
        MarkingKind::I0 => MarkingType::I0 { n: n.clone(), special },
        MarkingKind::II0 => MarkingType::II0 { n: n.clone(), special },
    }
}

/// The β = 0 connection with markings of the given types at `X0` (λ = 0)
/// and `X0 - Y0` (λ = -1).
pub fn solve_two_markings(
    t0: MarkingKind,
    n0: &Rational,
    t1: MarkingKind,
    n1: &Rational,
) -> Result<LeftInvariantConnection> {
    let (a, d) = marking_data(t0, n0)?;
    let (ap, dp) = marking_data(t1, n1)?;
    // λγ, λ²ε, λφ with λ = -1
    let gamma = -(&d + &dp - int(1) - &a);
    let epsilon = &a + &ap - int(2) * &d - int(2) * &dp + int(2);
    let phi = -(int(1) - int(2) * &d + &ap);
    let l = LeftInvariantConnection {
        alpha: a,
        beta: Rational::zero(),
        gamma,
        delta: d,
        epsilon,
        phi,
    };
    let cubic = l.marking_cubic();
    let minus_one = int(-1);
    if !peval(&cubic, &Rational::zero()).is_zero() || !peval(&cubic, &minus_one).is_zero() {
        return Err(Error::Inconsistent("requested directions are not markings".into()));
    }
    let (a0, d0) = l.marking_invariants(&Rational::zero());
    let (a1, d1) = l.marking_invariants(&minus_one);
    if classify_marking(&a0, &d0) != expected_type(t0, n0)
        || classify_marking(&a1, &d1) != expected_type(t1, n1)
    {
        return Err(Error::Inconsistent("marking types are not reproduced".into()));
    }
    if l.gamma.is_zero() && l.phi.is_zero() {
        return Err(Error::Inconsistent("gamma and phi vanish simultaneously".into()));
    }
    Ok(l)
}

/// Invariants of the third marking from those of two markings at λ = 0, -1.
pub fn third_marking_invariants(
    alpha: &Rational,
    alphap: &Rational,
    delta: &Rational,
    deltap: &Rational,
) -> Result<(Rational, Rational)> {
    let den = int(2) - int(2) * delta - int(2) * deltap + alpha + alphap;
    if den.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let a2 = alpha * alphap - int(1) - int(4) * delta * deltap + int(2) * delta + int(2) * deltap;
    let d2 = int(1) - delta * alphap - alpha * deltap + alpha * alphap + alpha + alphap
        - delta
        - deltap;
    Ok((a2 / &den, d2 / den))
}
