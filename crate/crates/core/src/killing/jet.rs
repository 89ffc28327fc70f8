//! Jet prolongation of the Killing system.
//!
//! Unknown 1-jet `J = (a, b, a_x, a_y, b_x, b_y)`. Each residual contains exactly
//! one second derivative, so all second derivatives are linear forms in `J`.
//! Equality of mixed third partials then gives linear constraints on `J`;
//! differentiating those constraints gives the higher orders.

use crate::algebra::linalg::{rank, rank_f64};
use crate::algebra::rational::to_f64;
use crate::algebra::{PuiseuxPoly, Rational};
use crate::connection::Connection;
use crate::error::{Error, Result};

type Form = [PuiseuxPoly; 6];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetReport {
    pub point: (Rational, Rational),
    /// `(order, kernel dimension)`, starting at order 2.
    pub dims: Vec<(u32, usize)>,
    pub stabilized: bool,
    pub final_dim: usize,
    /// True when the ranks came from the floating point fallback.
    pub approximate: bool,
}

fn unit(i: usize) -> Form {
    let mut f: Form = Default::default();
    f[i] = PuiseuxPoly::one();
    f
}

fn neg_form(parts: [PuiseuxPoly; 6]) -> Form {
    parts.map(|p| -p)
}

struct Prolongation {
    mx: [Form; 6],
    my: [Form; 6],
}

impl Prolongation {
    fn new(conn: &Connection) -> Self {
        let (a, b, c, d, e, f) = (conn.a(), conn.b(), conn.c(), conn.d(), conn.e(), conn.f());
        let z = PuiseuxPoly::zero;
        let two = |p: &PuiseuxPoly| p.scale(&crate::algebra::int(2));
        let axx = neg_form([a.dx(), a.dy(), a.clone(), -b, two(c), z()]);
        let bxx = neg_form([b.dx(), b.dy(), two(b), z(), &two(d) - a, -b]);
        let axy = neg_form([c.dx(), c.dy(), z(), a - d, e.clone(), c.clone()]);
        let bxy = neg_form([d.dx(), d.dy(), d.clone(), b.clone(), f - c, z()]);
        let ayy = neg_form([e.dx(), e.dy(), -e, &two(c) - f, z(), two(e)]);
        let byy = neg_form([f.dx(), f.dy(), z(), two(d), -e, f.clone()]);
        Self {
            mx: [unit(2), unit(4), axx, axy.clone(), bxx, bxy.clone()],
            my: [unit(3), unit(5), axy, ayy, bxy, byy],
        }
    }

    /// Total derivative of a linear form along x (`dir = 0`) or y (`dir = 1`).
    fn total(&self, form: &Form, dir: usize) -> Form {
        let m = if dir == 0 { &self.mx } else { &self.my };
        let mut out: Form = Default::default();
        for (i, c) in form.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out[i] += if dir == 0 { c.dx() } else { c.dy() };
            for (k, mk) in m[i].iter().enumerate() {
                if !mk.is_zero() {
                    out[k] += c * mk;
                }
            }
        }
        out
    }

    /// Mixed-partial compatibility forms.
    fn base_constraints(&self) -> Vec<Form> {
        (0..6)
            .map(|k| {
                let p = self.total(&self.mx[k], 1);
                let q = self.total(&self.my[k], 0);
                let mut out: Form = Default::default();
                for i in 0..6 {
                    out[i] = &p[i] - &q[i];
                }
                out
            })
            .filter(|f| f.iter().any(|p| !p.is_zero()))
            .collect()
    }
}

enum Rows {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

impl Rows {
    fn rank(&self) -> usize {
        match self {
            Rows::Exact(r) => rank(r),
            Rows::Float(r) => rank_f64(r, 1e-9),
        }
    }
}

fn evaluate(forms: &[Form], x0: &Rational, y0: &Rational, rows: &mut Rows) -> Result<()> {
    for f in forms {
        if let Rows::Exact(ex) = rows {
            let mut row = Vec::with_capacity(6);
            let mut failed = false;
            for p in f {
                match p.eval_exact(x0, y0) {
                    Ok(v) => row.push(v),
                    Err(Error::Exactness(_)) => {
                        failed = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if !failed {
                ex.push(row);
                continue;
            }
            let converted = ex.iter().map(|r| r.iter().map(to_f64).collect()).collect();
            *rows = Rows::Float(converted);
        }
        if let Rows::Float(fl) = rows {
            let (xf, yf) = (to_f64(x0), to_f64(y0));
            let row = f.iter().map(|p| p.eval_f64(xf, yf)).collect::<Result<Vec<_>>>()?;
            fl.push(row);
        }
    }
    Ok(())
}

/// Kernel dimension of the prolonged Killing system at `point`, per order.
pub fn jet_killing_dimension(
    conn: &Connection,
    point: (Rational, Rational),
    max_order: u32,
) -> Result<JetReport> {
    if max_order < 2 {
        return Err(Error::InvalidParams("max_order must be at least 2".into()));
    }
    let pro = Prolongation::new(conn);
    let (x0, y0) = (&point.0, &point.1);
    // layer t holds the derivatives ∂x^i ∂y^(t-i) of the base constraints
    let mut layer: Vec<Vec<Form>> = vec![pro.base_constraints()];
    let mut rows = Rows::Exact(Vec::new());
    let mut dims = Vec::new();
    for order in 2..=max_order {
        if order > 2 {
            let mut next: Vec<Vec<Form>> = layer
                .iter()
                .map(|group| group.iter().map(|f| pro.total(f, 0)).collect())
                .collect();
            let last = layer.last().unwrap();
            next.push(last.iter().map(|f| pro.total(f, 1)).collect());
            layer = next;
            for group in &layer {
                evaluate(group, x0, y0, &mut rows)?;
            }
        } else {
            evaluate(&layer[0], x0, y0, &mut rows)?;
        }
        let r = if matches!(&rows, Rows::Exact(v) if v.is_empty()) {
            0
        } else {
            rows.rank()
        };
        dims.push((order, 6 - r));
    }
    let stabilized = dims.len() >= 2 && dims[dims.len() - 1].1 == dims[dims.len() - 2].1;
    let final_dim = dims.last().unwrap().1;
    let approximate = matches!(rows, Rows::Float(_));
    Ok(JetReport {
        point,
        dims,
        stabilized,
        final_dim,
        approximate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::algebra::PuiseuxPoly;

    #[test]
    fn flat_has_full_affine_algebra() {
        let r = jet_killing_dimension(&Connection::flat(), (int(0), int(0)), 4).unwrap();
        assert_eq!(r.dims, vec![(2, 6), (3, 6), (4, 6)]);
        assert!(r.stabilized);
        assert_eq!(r.final_dim, 6);
        assert!(!r.approximate);
    }

    #[test]
    fn rejects_low_order() {
        assert!(jet_killing_dimension(&Connection::flat(), (int(0), int(0)), 1).is_err());
    }

    #[test]
    fn generic_connection_has_no_killing_fields() {
        let x = PuiseuxPoly::x();
        let y = PuiseuxPoly::y();
        let conn = Connection::from_symbols([
            &x * &y,
            y.pow(2),
            x.pow(3),
            &x + &y,
            x.pow(2),
            &y * &y.pow(2),
        ]);
        let r = jet_killing_dimension(&conn, (int(1), int(1)), 5).unwrap();
        assert_eq!(r.final_dim, 0);
    }
}
