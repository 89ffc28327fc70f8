//! Dense Gaussian elimination over exact rationals and floats.

use num_traits::Zero;

use super::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

/// Solves `A x = b` where `A` is given by columns. `None` if inconsistent.
///
/// When the columns are independent the solution is unique.
pub fn solve_columns(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = cols.len();
    let rows = b.len();
    let mut aug: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}

/// Rank of a float matrix with partial pivoting; pivots below
/// `rel_tol * max|entry|` count as zero.
pub fn rank_f64(m: &[Vec<f64>], rel_tol: f64) -> usize {
    let mut w = m.to_vec();
    let rows = w.len();
    let cols = w.first().map_or(0, |r| r.len());
    let scale = w
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let thresh = rel_tol * scale;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (p, best) = (r..rows)
            .map(|i| (i, w[i][c].abs()))
            .fold((r, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        if best <= thresh {
            continue;
        }
        w.swap(r, p);
        for i in r + 1..rows {
            let f = w[i][c] / w[r][c];
            if f != 0.0 {
                for j in c..cols {
                    w[i][j] -= f * w[r][j];
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[0, 1, 1], &[1, 3, 4]])), 2);
        assert_eq!(rank(&m(&[&[0, 0]])), 0);
        assert_eq!(rank_f64(&[vec![1.0, 2.0], vec![2.0, 4.0 + 1e-14]], 1e-9), 1);
        assert_eq!(rank_f64(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1e-9), 2);
    }

    #[test]
    fn solving() {
        let cols = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let x = solve_columns(&cols, &[int(2), int(3), int(5)]).unwrap();
        assert_eq!(x, vec![int(2), int(3)]);
        assert!(solve_columns(&cols, &[int(2), int(3), int(6)]).is_none());
    }
}
