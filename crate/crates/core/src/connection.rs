//! Torsion-free connections on the plane given by Christoffel symbols.
//!
//! Symbols are stored once per symmetric pair as
//! `A = Γ¹₁₁, B = Γ²₁₁, C = Γ¹₁₂, D = Γ²₁₂, E = Γ¹₂₂, F = Γ²₂₂`,
//! so `∇_{∂x}∂x = A∂x + B∂y`, `∇_{∂x}∂y = C∂x + D∂y`, `∇_{∂y}∂y = E∂x + F∂y`.

use std::fmt;

use crate::algebra::{MonoTriMap, PuiseuxPoly, Var, VectorField2};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    WholePlane,
    RightHalfPlane,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::WholePlane => "whole-plane",
            Domain::RightHalfPlane => "right-half-plane",
        }
    }

    pub fn contains(self, x: f64) -> bool {
        match self {
            Domain::WholePlane => x.is_finite(),
            Domain::RightHalfPlane => x > 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Connection {
    sym: [PuiseuxPoly; 6],
    domain: Domain,
    tag: Option<String>,
}

fn sym_index(k: usize, i: usize, j: usize) -> usize {
    assert!(k < 2 && i < 2 && j < 2, "index out of range");
    2 * (i + j) + k
}

fn inferred_domain(sym: &[PuiseuxPoly; 6]) -> Domain {
    if sym.iter().all(|p| p.is_polynomial_in_x()) {
        Domain::WholePlane
    } else {
        Domain::RightHalfPlane
    }
}

impl Connection {
    /// Builds a connection from `[A, B, C, D, E, F]`, inferring the domain.
    pub fn from_symbols(sym: [PuiseuxPoly; 6]) -> Self {
        let domain = inferred_domain(&sym);
        Self { sym, domain, tag: None }
    }

    /// As `from_symbols` with an explicit domain. Whole-plane requires every
    /// exponent of x to be a nonnegative integer.
    pub fn with_domain(sym: [PuiseuxPoly; 6], domain: Domain) -> Result<Self> {
        if domain == Domain::WholePlane && inferred_domain(&sym) != Domain::WholePlane {
            return Err(Error::InvalidParams(
                "whole-plane domain needs nonnegative integer x-exponents".into(),
            ));
        }
        Ok(Self { sym, domain, tag: None })
    }

    pub fn flat() -> Self {
        Self::from_symbols(Default::default()).tagged("flat")
    }

    pub fn tagged(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn symbols(&self) -> &[PuiseuxPoly; 6] {
        &self.sym
    }

    /// `Γ^k_{ij}` with zero-based indices (0 = x, 1 = y).
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &PuiseuxPoly {
        &self.sym[sym_index(k, i, j)]
    }

    pub fn a(&self) -> &PuiseuxPoly {
        &self.sym[0]
    }
    pub fn b(&self) -> &PuiseuxPoly {
        &self.sym[1]
    }
    pub fn c(&self) -> &PuiseuxPoly {
        &self.sym[2]
    }
    pub fn d(&self) -> &PuiseuxPoly {
        &self.sym[3]
    }
    pub fn e(&self) -> &PuiseuxPoly {
        &self.sym[4]
    }
    pub fn f(&self) -> &PuiseuxPoly {
        &self.sym[5]
    }

    /// Exact symbol equality, ignoring domain and tag.
    pub fn same_symbols(&self, other: &Connection) -> bool {
        self.sym == other.sym
    }

    pub fn is_flat_symbols(&self) -> bool {
        self.sym.iter().all(|p| p.is_zero())
    }

    /// `(∇_V W)^k = V(W^k) + V^i W^j Γ^k_{ij}`.
    pub fn covariant_derivative(&self, v: &VectorField2, w: &VectorField2) -> VectorField2 {
        let mut out = [v.apply(&w.cx), v.apply(&w.cy)];
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    let g = self.gamma(k, i, j);
                    if g.is_zero() {
                        continue;
                    }
                    *o += &(v.component(i) * w.component(j)) * g;
                }
            }
        }
        let [cx, cy] = out;
        VectorField2::new(cx, cy)
    }

    /// Torsion `T(∂x, ∂y)` vanishes.
    pub fn torsion_check(&self) -> bool {
        let (dx, dy) = (VectorField2::dx(), VectorField2::dy());
        let t = &(&self.covariant_derivative(&dx, &dy) - &self.covariant_derivative(&dy, &dx))
            - &dx.bracket(&dy);
        t.is_zero()
    }

    pub fn curvature(&self) -> CurvatureTensor {
        let (dx, dy) = (VectorField2::dx(), VectorField2::dy());
        let r = |z: &VectorField2| {
            let a = self.covariant_derivative(&dx, &self.covariant_derivative(&dy, z));
            let b = self.covariant_derivative(&dy, &self.covariant_derivative(&dx, z));
            &a - &b
        };
        let rx = r(&dx);
        let ry = r(&dy);
        CurvatureTensor {
            rx_x: rx.cx,
            rx_y: rx.cy,
            ry_x: ry.cx,
            ry_y: ry.cy,
        }
    }

    /// Connection `F^*∇` in the source coordinates of `F`.
    pub fn pullback(&self, f: &MonoTriMap) -> Result<Connection> {
        let j = f.jacobian();
        let jinv = f.inverse_jacobian();
        let comps = [f.x_component(), f.y_component()];
        let vars = [Var::X, Var::Y];
        let mut composed: Vec<PuiseuxPoly> = Vec::with_capacity(6);
        for p in &self.sym {
            composed.push(f.substitute(p)?);
        }
        let composed_gamma = |n: usize, l: usize, m: usize| &composed[sym_index(n, l, m)];

        let mut sym: [PuiseuxPoly; 6] = Default::default();
        for (i, jj) in [(0usize, 0usize), (0, 1), (1, 1)] {
            // inner[n] = ∂i∂j F^n + J[l][i] J[m][j] Γ^n_lm ∘ F
            let mut inner = [PuiseuxPoly::zero(), PuiseuxPoly::zero()];
            for (n, slot) in inner.iter_mut().enumerate() {
                *slot = comps[n].derive(vars[i]).derive(vars[jj]);
                for l in 0..2 {
                    for m in 0..2 {
                        let g = composed_gamma(n, l, m);
                        if g.is_zero() || j[l][i].is_zero() || j[m][jj].is_zero() {
                            continue;
                        }
                        *slot += &(&j[l][i] * &j[m][jj]) * g;
                    }
                }
            }
            for k in 0..2 {
                let mut v = PuiseuxPoly::zero();
                for (n, slot) in inner.iter().enumerate() {
                    if !jinv[k][n].is_zero() {
                        v += &jinv[k][n] * slot;
                    }
                }
                sym[sym_index(k, i, jj)] = v;
            }
        }
        Ok(Connection::from_symbols(sym))
    }

    /// True when `F^*∇ = ∇` exactly.
    pub fn is_isometry(&self, f: &MonoTriMap) -> Result<bool> {
        Ok(self.pullback(f)?.same_symbols(self))
    }

    /// Christoffel symbols at a point, `[A..F]`.
    pub fn eval_f64(&self, x: f64, y: f64) -> Result<[f64; 6]> {
        let mut out = [0.0; 6];
        for (o, p) in out.iter_mut().zip(&self.sym) {
            *o = p.eval_f64(x, y)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["A", "B", "C", "D", "E", "F"];
        if let Some(t) = &self.tag {
            writeln!(f, "family: {t}")?;
        }
        writeln!(f, "domain: {}", self.domain.as_str())?;
        for (n, p) in names.iter().zip(&self.sym) {
            writeln!(f, "{n} = {p}")?;
        }
        Ok(())
    }
}

/// `R(∂x,∂y)∂x = rx_x ∂x + rx_y ∂y` and `R(∂x,∂y)∂y = ry_x ∂x + ry_y ∂y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    pub rx_x: PuiseuxPoly,
    pub rx_y: PuiseuxPoly,
    pub ry_x: PuiseuxPoly,
    pub ry_y: PuiseuxPoly,
}

impl CurvatureTensor {
    pub fn components(&self) -> [&PuiseuxPoly; 4] {
        [&self.rx_x, &self.rx_y, &self.ry_x, &self.ry_y]
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|p| p.is_zero())
    }

    /// Matrix `M[k][j]`: component k of `R(∂x,∂y)∂_j`.
    pub fn matrix(&self) -> [[PuiseuxPoly; 2]; 2] {
        [
            [self.rx_x.clone(), self.ry_x.clone()],
            [self.rx_y.clone(), self.ry_y.clone()],
        ]
    }
}

impl fmt::Display for CurvatureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "R(dx,dy)dx = ({})dx + ({})dy", self.rx_x, self.rx_y)?;
        write!(f, "R(dx,dy)dy = ({})dx + ({})dy", self.ry_x, self.ry_y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::mono;
    use crate::algebra::rational::{int, rat};
    use crate::algebra::Rational;

    /// Type I(2) with parameters (3/4, -3/4, -3/4), built by hand.
    fn example() -> Connection {
        Connection::from_symbols([
            PuiseuxPoly::zero(),
            PuiseuxPoly::zero(),
            mono(-3, 4, 2, 1, 0),
            PuiseuxPoly::zero(),
            mono(3, 8, 5, 1, 0),
            mono(3, 4, 2, 1, 0),
        ])
    }

    fn field(cx: PuiseuxPoly, cy: PuiseuxPoly) -> VectorField2 {
        VectorField2::new(cx, cy)
    }

    fn m(c: Rational, r: Rational, a: Rational, s: Rational, g: PuiseuxPoly) -> MonoTriMap {
        MonoTriMap::new(c, r, a, s, g).unwrap()
    }

    #[test]
    fn flat_leibniz() {
        let v = field(PuiseuxPoly::x(), PuiseuxPoly::zero());
        assert_eq!(Connection::flat().covariant_derivative(&v, &v), v);
    }

    #[test]
    fn example_frame_relations() {
        let c = example();
        let z = field(mono(1, 2, 1, 1, 0), mono(1, 1, -2, 1, 0));
        let a = field(mono(1, 2, 1, 1, 0), mono(-1, 1, 0, 1, 1));
        assert_eq!(c.covariant_derivative(&z, &z), z.scale(&rat(-1, 4)));
        assert_eq!(c.covariant_derivative(&a, &z), &a.scale(&rat(3, 4)) - &z);
    }

    #[test]
    fn torsion_free() {
        assert!(Connection::flat().torsion_check());
        assert!(example().torsion_check());
    }

    #[test]
    fn curvature_examples() {
        assert!(Connection::flat().curvature().is_zero());
        let r = example().curvature();
        assert!(!r.is_zero());
        for p in r.components() {
            for (_, xe, _) in p.terms() {
                assert!(*xe >= int(1));
            }
        }
    }

    #[test]
    fn sigma_pullbacks() {
        let sigma = m(int(-1), int(1), int(1), int(0), PuiseuxPoly::zero());
        assert!(example().is_isometry(&sigma).unwrap());
        assert!(example().is_isometry(&MonoTriMap::identity()).unwrap());
        let ex_sigma = m(int(-1), int(1), int(-1), int(0), mono(-2, 1, -2, 1, 0));
        assert!(example().is_isometry(&ex_sigma).unwrap());
        let lin = m(int(3), int(1), rat(-2, 5), int(0), PuiseuxPoly::zero());
        assert!(Connection::flat().is_isometry(&lin).unwrap());
    }

    #[test]
    fn whole_plane_validation() {
        let sym = [mono(1, 1, -1, 1, 0), PuiseuxPoly::zero(), PuiseuxPoly::zero(),
                   PuiseuxPoly::zero(), PuiseuxPoly::zero(), PuiseuxPoly::zero()];
        assert_eq!(Connection::from_symbols(sym.clone()).domain(), Domain::RightHalfPlane);
        assert!(Connection::with_domain(sym, Domain::WholePlane).is_err());
    }
}
