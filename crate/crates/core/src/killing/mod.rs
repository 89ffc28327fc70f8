//! Killing fields: residual system, exact checks, structure constants and
//! pointwise rank.

mod jet;

pub use jet::{jet_killing_dimension, JetReport};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::linalg::{rank, solve_columns};
use crate::algebra::{PuiseuxPoly, Rational, VectorField2};
use crate::connection::Connection;
use crate::error::{Error, Result};

/// The six components of the Lie derivative of the connection along a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingResiduals {
    pub r: [PuiseuxPoly; 6],
}

impl KillingResiduals {
    pub fn is_zero(&self) -> bool {
        self.r.iter().all(|p| p.is_zero())
    }
}

/// Residuals for `V = a∂x + b∂y`; `V` is Killing iff all six vanish.
///
/// The order is `(∂x,∂x)`, `(∂x,∂y)`, `(∂y,∂y)` slots, each split into the
/// `∂x` and `∂y` components.
pub fn killing_residuals(conn: &Connection, v: &VectorField2) -> KillingResiduals {
    let (a, b) = (&v.cx, &v.cy);
    let (ax, ay, bx, by) = (a.dx(), a.dy(), b.dx(), b.dy());
    let (ga, gb, gc, gd, ge, gf) = (conn.a(), conn.b(), conn.c(), conn.d(), conn.e(), conn.f());
    let two = PuiseuxPoly::constant(crate::algebra::int(2));
    let lin = |s: [&PuiseuxPoly; 4], d2: PuiseuxPoly, g: &PuiseuxPoly| {
        // d2 + s0*ax + s1*ay + s2*bx + s3*by + g_x*a + g_y*b
        let mut out = d2;
        for (c, j) in s.iter().zip([&ax, &ay, &bx, &by]) {
            if !c.is_zero() {
                out += *c * j;
            }
        }
        out += &g.dx() * a;
        out += &g.dy() * b;
        out
    };
    let neg = |p: &PuiseuxPoly| -p;
    let zero = PuiseuxPoly::zero();

    let c2 = &two * gc;
    let d2a = &(&two * gd) - ga;
    let b2 = &two * gb;
    let a_d = ga - gd;
    let f_c = gf - gc;
    let c2f = &c2 - gf;
    let e2 = &two * ge;
    let d2 = &two * gd;
    let (nb, ne) = (neg(gb), neg(ge));

    let r1 = lin([ga, &nb, &c2, &zero], ax.dx(), ga);
    let r2 = lin([&b2, &zero, &d2a, &nb], bx.dx(), gb);
    let r3 = lin([&zero, &a_d, ge, gc], ax.dy(), gc);
    let r4 = lin([gd, gb, &f_c, &zero], bx.dy(), gd);
    let r5 = lin([&ne, &c2f, &zero, &e2], ay.dy(), ge);
    let r6 = lin([&zero, &d2, &ne, gf], by.dy(), gf);
    KillingResiduals { r: [r1, r2, r3, r4, r5, r6] }
}

pub fn is_killing(conn: &Connection, v: &VectorField2) -> bool {
    killing_residuals(conn, v).is_zero()
}

/// Lie derivative `(L_V ∇)(Y, Z) = [V, ∇_Y Z] - ∇_Y [V, Z] - ∇_{[V,Y]} Z`.
pub fn lie_derivative(
    conn: &Connection,
    v: &VectorField2,
    y: &VectorField2,
    z: &VectorField2,
) -> VectorField2 {
    let t1 = v.bracket(&conn.covariant_derivative(y, z));
    let t2 = conn.covariant_derivative(y, &v.bracket(z));
    let t3 = conn.covariant_derivative(&v.bracket(y), z);
    &(&t1 - &t2) - &t3
}

fn coefficient_keys(fields: &[VectorField2]) -> BTreeMap<(u8, Rational, u32), usize> {
    let mut keys = BTreeMap::new();
    for f in fields {
        for (comp, p) in [(0u8, &f.cx), (1u8, &f.cy)] {
            for (_, xe, ye) in p.terms() {
                let n = keys.len();
                keys.entry((comp, xe.clone(), ye)).or_insert(n);
            }
        }
    }
    // renumber in key order for determinism
    for (i, v) in keys.values_mut().enumerate() {
        *v = i;
    }
    keys
}

fn coefficient_vector(
    f: &VectorField2,
    keys: &BTreeMap<(u8, Rational, u32), usize>,
) -> Option<Vec<Rational>> {
    let mut v = vec![Rational::zero(); keys.len()];
    for (comp, p) in [(0u8, &f.cx), (1u8, &f.cy)] {
        for (c, xe, ye) in p.terms() {
            let idx = keys.get(&(comp, xe.clone(), ye))?;
            v[*idx] = c.clone();
        }
    }
    Some(v)
}

/// Structure constants `c[i][j][k]` with `[V_i, V_j] = Σ_k c[i][j][k] V_k`.
pub fn structure_constants(fields: &[VectorField2]) -> Result<Vec<Vec<Vec<Rational>>>> {
    let keys = coefficient_keys(fields);
    let cols: Vec<Vec<Rational>> = fields
        .iter()
        .map(|f| coefficient_vector(f, &keys).expect("own keys"))
        .collect();
    if !cols.is_empty() {
        let rows: Vec<Vec<Rational>> = (0..keys.len())
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        if rank(&rows) < fields.len() {
            return Err(Error::InvalidParams("fields are linearly dependent".into()));
        }
    }
    let n = fields.len();
    let mut out = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let br = fields[i].bracket(&fields[j]);
            let rhs = coefficient_vector(&br, &keys).ok_or(Error::NotClosed { i, j })?;
            let sol = solve_columns(&cols, &rhs).ok_or(Error::NotClosed { i, j })?;
            for k in 0..n {
                out[j][i][k] = -sol[k].clone();
            }
            out[i][j] = sol;
        }
    }
    Ok(out)
}

/// Rank of the evaluated fields at a rational point.
pub fn rank_at(fields: &[VectorField2], point: (&Rational, &Rational)) -> Result<usize> {
    let mut rows = vec![Vec::new(), Vec::new()];
    for f in fields {
        let [u, v] = f.eval_exact(point.0, point.1)?;
        rows[0].push(u);
        rows[1].push(v);
    }
    Ok(rank(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::mono;
    use crate::algebra::rational::{int, rat};

    fn f(cx: PuiseuxPoly, cy: PuiseuxPoly) -> VectorField2 {
        VectorField2::new(cx, cy)
    }

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

    /// A dense connection with every symbol nonzero and y-dependent.
    fn generic() -> Connection {
        Connection::from_symbols([
            &mono(1, 1, 1, 1, 1) + &mono(2, 3, 0, 1, 2),
            &mono(-1, 2, 2, 1, 0) + &mono(1, 1, 1, 1, 1),
            &mono(3, 1, 0, 1, 1) + &mono(1, 5, 3, 1, 0),
            &mono(1, 1, 2, 1, 2) + &mono(-2, 1, 0, 1, 0),
            &mono(1, 1, 1, 1, 0) + &mono(1, 1, 0, 1, 3),
            &mono(-1, 1, 1, 1, 2) + &mono(1, 7, 4, 1, 0),
        ])
    }

    #[test]
    fn residuals_match_lie_derivative() {
        let conn = generic();
        let v = f(
            &mono(1, 1, 3, 1, 2) + &mono(2, 1, 1, 1, 0),
            &mono(-1, 1, 2, 1, 1) + &mono(1, 3, 0, 1, 3),
        );
        let (dx, dy) = (VectorField2::dx(), VectorField2::dy());
        let lxx = lie_derivative(&conn, &v, &dx, &dx);
        let lxy = lie_derivative(&conn, &v, &dx, &dy);
        let lyy = lie_derivative(&conn, &v, &dy, &dy);
        let res = killing_residuals(&conn, &v);
        let expect = [lxx.cx, lxx.cy, lxy.cx, lxy.cy, lyy.cx, lyy.cy];
        for (k, (got, want)) in res.r.iter().zip(expect.iter()).enumerate() {
            assert_eq!(got, want, "residual {}", k + 1);
        }
    }

    #[test]
    fn residual_examples() {
        let flat = Connection::flat();
        assert!(is_killing(&flat, &f(PuiseuxPoly::x(), PuiseuxPoly::zero())));
        assert!(is_killing(&example(), &VectorField2::dy()));
        let res = killing_residuals(&flat, &f(mono(1, 1, 2, 1, 0), PuiseuxPoly::zero()));
        assert_eq!(res.r[0], PuiseuxPoly::constant(int(2)));
        assert!(res.r[1..].iter().all(|p| p.is_zero()));
    }

    #[test]
    fn structure_constant_examples() {
        let a = f(mono(1, 2, 1, 1, 0), mono(-1, 1, 0, 1, 1));
        let b = VectorField2::dy();
        let c = structure_constants(&[a, b]).unwrap();
        assert_eq!(c[0][1], vec![int(0), int(1)]);
        assert_eq!(c[1][0], vec![int(0), int(-1)]);

        let e = f(PuiseuxPoly::zero(), PuiseuxPoly::x());
        let ff = f(PuiseuxPoly::y(), PuiseuxPoly::zero());
        let h = f(PuiseuxPoly::x(), -PuiseuxPoly::y());
        let c = structure_constants(&[e, ff, h]).unwrap();
        // [e,f] = h, [e,h] = -2e, [f,h] = 2f
        assert_eq!(c[0][1], vec![int(0), int(0), int(1)]);
        assert_eq!(c[0][2], vec![int(-2), int(0), int(0)]);
        assert_eq!(c[1][2], vec![int(0), int(2), int(0)]);

        let r = structure_constants(&[VectorField2::dx(), f(PuiseuxPoly::zero(), mono(1, 1, 2, 1, 0))]);
        assert_eq!(r, Err(Error::NotClosed { i: 0, j: 1 }));
        // [x∂x, x²∂y] = 2x²∂y stays in the span
        let ok = structure_constants(&[
            f(PuiseuxPoly::x(), PuiseuxPoly::zero()),
            f(PuiseuxPoly::zero(), mono(1, 1, 2, 1, 0)),
        ])
        .unwrap();
        assert_eq!(ok[0][1], vec![int(0), int(2)]);
    }

    #[test]
    fn ranks() {
        let a = f(PuiseuxPoly::x(), mono(-2, 1, 0, 1, 1));
        let b = VectorField2::dy();
        assert_eq!(rank_at(&[a.clone(), b.clone()], (&int(1), &int(0))).unwrap(), 2);
        assert_eq!(rank_at(&[a, b], (&int(0), &int(0))).unwrap(), 1);
        let lin = [
            f(PuiseuxPoly::zero(), PuiseuxPoly::x()),
            f(PuiseuxPoly::y(), PuiseuxPoly::zero()),
            f(PuiseuxPoly::x(), -PuiseuxPoly::y()),
        ];
        assert_eq!(rank_at(&lin, (&int(0), &int(0))).unwrap(), 0);
        assert_eq!(rank_at(&lin, (&rat(1, 2), &int(3))).unwrap(), 2);
    }
}
