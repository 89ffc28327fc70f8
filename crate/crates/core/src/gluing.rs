//! Built-in coordinate maps, the boundary embeddings of the affine group,
//! and the global model glued from a chain of normal-form charts.

use std::fmt;

use num_traits::{One, Zero};

use crate::affine::{solve_two_markings, LeftInvariantConnection, MarkingKind};
use crate::algebra::rational::{fmt_rat, int, is_integer, rat};
use crate::algebra::{MonoTriMap, PuiseuxPoly, Rational, VectorField2};
use crate::catalog::{generators, identify_params, make_normal_form, scale_params, Family, ParamClass};
use crate::connection::Connection;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinMap {
    /// `(x, y) ↦ (-x, y)`
    Sigma,
    /// `(x, y) ↦ (x, -y)`
    Rho,
    /// `(u, v) ↦ (u, u - v)`
    Beta,
    /// `(u, v) ↦ (u^(-1/n), v u^(-1/n))`
    Psi1(i64),
    /// `(u, v) ↦ (u^(-1/n), v - 1)`
    Psi2(i64),
    /// `(x, y) ↦ (-x, -y - 2x^(-2))`
    ExampleSigma,
}

impl BuiltinMap {
    /// Parses `sigma`, `rho`, `beta`, `psi1(n)`, `psi2(n)`, `example_sigma`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let with_n = |prefix: &str| -> Option<Result<i64>> {
            let rest = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(
                rest.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidN(format!("{rest:?} is not an integer"))),
            )
        };
        Ok(match s {
            "sigma" => BuiltinMap::Sigma,
            "rho" => BuiltinMap::Rho,
            "beta" => BuiltinMap::Beta,
            "example_sigma" => BuiltinMap::ExampleSigma,
            _ => {
                if let Some(n) = with_n("psi1") {
                    BuiltinMap::Psi1(n?)
                } else if let Some(n) = with_n("psi2") {
                    BuiltinMap::Psi2(n?)
                } else {
                    return Err(Error::Parse(format!("unknown map {s:?}")));
                }
            }
        })
    }
}

impl fmt::Display for BuiltinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinMap::Sigma => f.write_str("sigma"),
            BuiltinMap::Rho => f.write_str("rho"),
            BuiltinMap::Beta => f.write_str("beta"),
            BuiltinMap::Psi1(n) => write!(f, "psi1({n})"),
            BuiltinMap::Psi2(n) => write!(f, "psi2({n})"),
            BuiltinMap::ExampleSigma => f.write_str("example_sigma"),
        }
    }
}

fn check_n(n: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidN(format!("n = {n}, expected an integer at least 2")));
    }
    Ok(())
}

fn map(c: Rational, r: Rational, a: Rational, s: Rational, g: PuiseuxPoly) -> MonoTriMap {
    MonoTriMap::new(c, r, a, s, g).expect("built-in maps are valid")
}

pub fn builtin_map(m: BuiltinMap) -> Result<MonoTriMap> {
    let (o, z) = (Rational::one, Rational::zero);
    Ok(match m {
        BuiltinMap::Sigma => map(-o(), o(), o(), z(), PuiseuxPoly::zero()),
        BuiltinMap::Rho => map(o(), o(), -o(), z(), PuiseuxPoly::zero()),
        BuiltinMap::Beta => map(o(), o(), -o(), z(), PuiseuxPoly::x()),
        BuiltinMap::Psi1(n) => {
            check_n(n)?;
            map(o(), rat(-1, n), o(), rat(-1, n), PuiseuxPoly::zero())
        }
        BuiltinMap::Psi2(n) => {
            check_n(n)?;
            map(o(), rat(-1, n), o(), z(), PuiseuxPoly::constant(-o()))
        }
        BuiltinMap::ExampleSigma => map(
            -o(),
            o(),
            -o(),
            z(),
            PuiseuxPoly::term(int(-2), int(-2), 0),
        ),
    })
}

/// `X0 = u∂u`, `Y0 = -u∂v`, `A0 = -(u∂u + v∂v)` on the affine group.
pub fn affine_frames() -> [VectorField2; 3] {
    let u = PuiseuxPoly::x;
    let v = PuiseuxPoly::y;
    [
        VectorField2::new(u(), PuiseuxPoly::zero()),
        VectorField2::new(PuiseuxPoly::zero(), -u()),
        VectorField2::new(-u(), -v()),
    ]
}

/// The boundary embedding for `n`: `psi1(n)` when `n` is odd, `psi2(n)` when even.
pub fn boundary_embedding(n: i64) -> Result<MonoTriMap> {
    check_n(n)?;
    builtin_map(if n % 2 == 1 { BuiltinMap::Psi1(n) } else { BuiltinMap::Psi2(n) })
}

/// Normal-form family carried by a boundary of type `n`.
pub fn boundary_family(n: i64) -> Family {
    if n % 2 == 1 {
        Family::II1
    } else {
        Family::I
    }
}

fn boundary_marking(n: i64) -> MarkingKind {
    if n % 2 == 1 {
        MarkingKind::II0
    } else {
        MarkingKind::I0
    }
}

/// Checks exactly that the embedding sends `X0`, `Y0` to the centralizer
/// fields `X`, `Y` and `A0` to `A` (case 1, odd `n`) or `A - B` (case 2, even `n`).
pub fn frame_pushforward_check(n: i64, case: u8) -> Result<bool> {
    check_n(n)?;
    let psi = match (case, n % 2) {
        (1, 1) => builtin_map(BuiltinMap::Psi1(n))?,
        (2, 0) => builtin_map(BuiltinMap::Psi2(n))?,
        (1 | 2, _) => {
            return Err(Error::InvalidN(format!("n = {n} has the wrong parity for case {case}")))
        }
        _ => return Err(Error::InvalidParams(format!("case must be 1 or 2, got {case}"))),
    };
    let family = if case == 1 { Family::II1 } else { Family::I };
    // generators do not depend on (γ, φ, ε)
    let gens = generators(&ParamClass {
        family,
        n: Some(int(n)),
        gamma: Rational::one(),
        phi: Rational::zero(),
        epsilon: Rational::zero(),
        basepoint: (Rational::zero(), Rational::zero()),
    })?;
    let (a, b) = (&gens.killing[0], &gens.killing[1]);
    let (x, y) = (&gens.centralizer[0], &gens.centralizer[1]);
    let target_a = if case == 1 { a.clone() } else { a - b };
    let [x0, y0, a0] = affine_frames();
    Ok(psi.push_forward(&x0)? == *x
        && psi.push_forward(&y0)? == *y
        && psi.push_forward(&a0)? == target_a)
}

/// The left-invariant connection as Christoffel symbols in `(u, v)`, `u > 0`.
pub fn left_invariant_symbols(l: &LeftInvariantConnection) -> Connection {
    let inv = |c: Rational| PuiseuxPoly::term(c, int(-1), 0);
    Connection::from_symbols([
        inv(&l.alpha - int(1)),
        inv(-l.beta.clone()),
        inv(-l.gamma.clone()),
        inv(&l.delta - int(1)),
        inv(l.epsilon.clone()),
        inv(-l.phi.clone()),
    ])
}

/// Left-invariant connection whose markings at `X0` and `X0 - Y0` have the
/// boundary types of `n1` and `n2`.
pub fn model_sextuple(n1: i64, n2: i64) -> Result<LeftInvariantConnection> {
    check_n(n1)?;
    check_n(n2)?;
    solve_two_markings(boundary_marking(n1), &int(n1), boundary_marking(n2), &int(n2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub index: i64,
    pub conn: Connection,
    pub params: ParamClass,
    pub orientation: i8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    /// Name of the gluing map.
    pub label: String,
    pub map: MonoTriMap,
    /// The actual coordinate change is `σ ∘ map ∘ σ`; both charts must then
    /// also be σ-invariant.
    pub sigma_conjugated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atlas {
    pub n1: i64,
    pub n2: i64,
    pub sextuple: LeftInvariantConnection,
    pub charts: Vec<Chart>,
    pub transitions: Vec<Transition>,
}

/// Builds the chain of boundary charts `-window..=window`.
///
/// Odd indices carry the `n1` boundary (embedding `Ψ_{n1}`), even indices the
/// `n2` boundary (embedding `Ψ_{n2} ∘ β`). Neighbouring charts share one
/// region of the affine group; each chart also carries its σ self-gluing.
pub fn build_model_atlas(n1: i64, n2: i64, window: u32) -> Result<Atlas> {
    check_n(n1)?;
    check_n(n2)?;
    if window == 0 {
        return Err(Error::InvalidParams("window must be positive".into()));
    }
    let sextuple = model_sextuple(n1, n2)?;
    let base = left_invariant_symbols(&sextuple);
    let beta = builtin_map(BuiltinMap::Beta)?;
    let psi_n1 = boundary_embedding(n1)?;
    let psi_n2 = boundary_embedding(n2)?;
    // chart coordinates -> affine group
    let from_n1 = psi_n1.invert()?;
    let from_n2 = beta.compose(&psi_n2.invert()?)?;
    let chart_data = |from_chart: &MonoTriMap, n: i64| -> Result<(Connection, ParamClass)> {
        let conn = base.pullback(from_chart)?;
        let params = identify_params(&conn, boundary_family(n), &int(n))?;
        Ok((make_normal_form(&params)?, params))
    };
    let (conn1, p1) = chart_data(&from_n1, n1)?;
    let (conn2, p2) = chart_data(&from_n2, n2)?;
    // Ψ_{n1} ∘ β ∘ Ψ_{n2}^{-1} and its inverse
    let t21 = psi_n1.compose(&from_n2)?;
    let t12 = psi_n2.compose(&beta.compose(&from_n1)?)?;
    let sigma = builtin_map(BuiltinMap::Sigma)?;

    let w = window as i64;
    let mut charts = Vec::new();
    for j in -w..=w {
        let (conn, params) = if j.rem_euclid(2) == 1 {
            (conn1.clone(), p1.clone())
        } else {
            (conn2.clone(), p2.clone())
        };
        charts.push(Chart {
            index: j,
            conn: conn.tagged(format!("chart {j}: {}", params.label())),
            params,
            orientation: if j.rem_euclid(2) == 0 { 1 } else { -1 },
        });
    }
    let mut transitions = Vec::new();
    for (i, c) in charts.iter().enumerate() {
        transitions.push(Transition {
            from: i,
            to: i,
            label: "sigma".into(),
            map: sigma.clone(),
            sigma_conjugated: false,
        });
        if i + 1 == charts.len() {
            break;
        }
        // the region between chart j and j+1 sits on the x > 0 side of the
        // even-indexed chart's n2 boundary when j is even
        let (map, label, conj) = if c.index.rem_euclid(2) == 0 {
            (t21.clone(), format!("psi({n1}) o beta o psi({n2})^-1"), false)
        } else {
            (t12.clone(), format!("sigma o psi({n2}) o beta o psi({n1})^-1 o sigma"), true)
        };
        transitions.push(Transition { from: i, to: i + 1, label, map, sigma_conjugated: conj });
    }
    Ok(Atlas { n1, n2, sextuple, charts, transitions })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionCheck {
    pub index: usize,
    pub from: i64,
    pub to: i64,
    pub label: String,
    pub isometry: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasCheck {
    pub transitions: Vec<TransitionCheck>,
    pub connected: bool,
}

impl AtlasCheck {
    pub fn is_valid(&self) -> bool {
        self.connected && self.transitions.iter().all(|t| t.isometry)
    }

    /// Index of the first transition that is not an isometry.
    pub fn counterexample(&self) -> Option<usize> {
        self.transitions.iter().find(|t| !t.isometry).map(|t| t.index)
    }
}

/// `T^* ∇_to = ∇_from` for one transition.
fn transition_is_isometry(atlas: &Atlas, t: &Transition) -> Result<bool> {
    let (from, to) = (&atlas.charts[t.from].conn, &atlas.charts[t.to].conn);
    if t.sigma_conjugated {
        let sigma = builtin_map(BuiltinMap::Sigma)?;
        if !from.is_isometry(&sigma)? || !to.is_isometry(&sigma)? {
            return Ok(false);
        }
    }
    Ok(to.pullback(&t.map)?.same_symbols(from))
}

/// Checks every transition exactly. A failing pullback (e.g. a map that is
/// not defined on the chart) counts as a non-isometry.
pub fn verify_atlas(atlas: &Atlas) -> AtlasCheck {
    let transitions = atlas
        .transitions
        .iter()
        .enumerate()
        .map(|(index, t)| TransitionCheck {
            index,
            from: atlas.charts[t.from].index,
            to: atlas.charts[t.to].index,
            label: t.label.clone(),
            isometry: transition_is_isometry(atlas, t).unwrap_or(false),
        })
        .collect();
    let n = atlas.charts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for t in &atlas.transitions {
        let (a, b) = (find(&mut parent, t.from), find(&mut parent, t.to));
        parent[a] = b;
    }
    let connected = n > 0 && (0..n).all(|i| find(&mut parent, i) == find(&mut parent, 0));
    AtlasCheck { transitions, connected }
}

/// Plain-text report, one line per transition.
pub fn atlas_report(atlas: &Atlas, check: &AtlasCheck) -> String {
    let mut out = format!(
        "model n1={} n2={} sextuple={}\n",
        atlas.n1, atlas.n2, atlas.sextuple
    );
    for c in &atlas.charts {
        out.push_str(&format!("chart {}: {}\n", c.index, c.params.label()));
    }
    for t in &check.transitions {
        out.push_str(&format!(
            "transition {}: from={} to={} map={} isometry={}\n",
            t.index, t.from, t.to, t.label, t.isometry
        ));
    }
    out.push_str(&format!(
        "connected={} verified={}\n",
        check.connected,
        check.is_valid()
    ));
    out
}

/// Holonomy data of a compact quotient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuotientData {
    pub k: u32,
    pub tau: f64,
    pub theta: f64,
}

impl QuotientData {
    pub fn new(k: u32, tau: f64, theta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParams("tau must be positive".into()));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParams("theta must be finite".into()));
        }
        Ok(Self { k, tau, theta })
    }
}

/// `(e^τ, e^((θ + k)τ))`.
pub fn continuation_factors(q: &QuotientData) -> (f64, f64) {
    (q.tau.exp(), ((q.theta + q.k as f64) * q.tau).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reflection {
    Sigma,
    Rho,
    SigmaRho,
}

impl Reflection {
    pub fn map(self) -> MonoTriMap {
        let s = builtin_map(BuiltinMap::Sigma).unwrap();
        let r = builtin_map(BuiltinMap::Rho).unwrap();
        match self {
            Reflection::Sigma => s,
            Reflection::Rho => r,
            Reflection::SigmaRho => s.compose(&r).unwrap(),
        }
    }
}

/// The scale `μ` by which a reflection acts on `(γ, φ, ε)` of a Type I or II
/// normal form with integer `n`.
pub fn reflection_scale(family: Family, n: &Rational, r: Reflection) -> Result<Rational> {
    if !is_integer(n) {
        return Err(Error::InvalidN(format!("n = {} is not an integer", fmt_rat(n))));
    }
    let odd = (n.to_integer() % 2u8) != 0.into();
    let sigma = match family {
        Family::I => if odd { -1 } else { 1 },
        Family::II0 | Family::II1 => if odd { 1 } else { -1 },
        f => return Err(Error::FamilyMismatch(format!("no reflection table for {}", f.name()))),
    };
    if family == Family::II1 && r != Reflection::Sigma {
        return Err(Error::InvalidParams("rho does not fix the basepoint (0, 1)".into()));
    }
    Ok(int(match r {
        Reflection::Sigma => sigma,
        Reflection::Rho => -1,
        Reflection::SigmaRho => -sigma,
    }))
}

/// True when pulling back the normal form by the reflection gives the
/// normal form rescaled by [`reflection_scale`].
pub fn reflection_table_holds(p: &ParamClass, r: Reflection) -> Result<bool> {
    let n = p
        .n
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("n is required".into()))?;
    let mu = reflection_scale(p.family, n, r)?;
    let lhs = make_normal_form(p)?.pullback(&r.map())?;
    let rhs = make_normal_form(&scale_params(p, &mu).or_else(|e| match e {
        // Type II1 only admits positive μ as a normalization, but the
        // pulled-back symbols are still those of the rescaled parameters
        Error::InvalidScale(_) => {
            let mut q = p.clone();
            q.gamma = &mu * &p.gamma;
            q.phi = &mu * &p.phi;
            q.epsilon = &mu * &mu * &p.epsilon;
            Ok(q)
        }
        e => Err(e),
    })?)?;
    Ok(lhs.same_symbols(&rhs))
}
