//! Special affine curvature of a sampled curve.

use super::GeodesicTrace;
use crate::error::{Error, Result};

/// Quintic Hermite piece between two samples, matching position, velocity
/// and acceleration at both ends.
pub(super) struct Segment {
    s0: f64,
    coef: [[f64; 6]; 2],
}

impl Segment {
    pub(super) fn new(trace: &GeodesicTrace, i: usize) -> Self {
        let (p, q) = (&trace.samples[i], &trace.samples[i + 1]);
        let (ap, aq) = (trace.accel[i], trace.accel[i + 1]);
        let h = q.s - p.s;
        let mut coef = [[0.0; 6]; 2];
        let ends = [
            ([p.x, p.vx, ap[0]], [q.x, q.vx, aq[0]]),
            ([p.y, p.vy, ap[1]], [q.y, q.vy, aq[1]]),
        ];
        for (c, (l, r)) in coef.iter_mut().zip(ends) {
            let dp = r[0] - (l[0] + l[1] * h + 0.5 * l[2] * h * h);
            let dv = (r[1] - (l[1] + l[2] * h)) * h;
            let da = (r[2] - l[2]) * h * h;
            let z = 0.5 * (da - 6.0 * dv + 12.0 * dp);
            let y = dv - 3.0 * dp - 2.0 * z;
            let x = dp - y - z;
            *c = [l[0], l[1], 0.5 * l[2], x / h.powi(3), y / h.powi(4), z / h.powi(5)];
        }
        Self { s0: p.s, coef }
    }

    /// Position, velocity and acceleration at `s`.
    pub(super) fn eval(&self, s: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let t = s - self.s0;
        let mut out = ([0.0; 2], [0.0; 2], [0.0; 2]);
        for (d, c) in self.coef.iter().enumerate() {
            let mut p = 0.0;
            let mut v = 0.0;
            let mut a = 0.0;
            for k in (0..6).rev() {
                p = p * t + c[k];
                if k >= 1 {
                    v = v * t + k as f64 * c[k];
                }
                if k >= 2 {
                    a = a * t + (k * (k - 1)) as f64 * c[k];
                }
            }
            out.0[d] = p;
            out.1[d] = v;
            out.2[d] = a;
        }
        out
    }

    fn density(&self, s: f64) -> f64 {
        let (_, v, a) = self.eval(s);
        (v[0] * a[1] - v[1] * a[0]).abs().cbrt()
    }

    /// `∫_{s0}^{s} |det(v, a)|^{1/3}` by 3-point Gauss-Legendre.
    fn arc(&self, s: f64) -> f64 {
        const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
        const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        let half = 0.5 * (s - self.s0);
        let mid = self.s0 + half;
        NODES
            .iter()
            .zip(WEIGHTS)
            .map(|(n, w)| w * self.density(mid + half * n))
            .sum::<f64>()
            * half
    }
}

fn det(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Median special affine curvature `det(c_σσ, c_σσσ)` along the trace, where
/// `σ` is special affine arc length. Negative for curves turning clockwise
/// relative to their affine normal, so hyperbolas give `-1`.
pub fn affine_curvature_estimate(trace: &GeodesicTrace) -> Result<f64> {
    let n = trace.samples.len();
    if n < 7 {
        return Err(Error::DegenerateCurve(format!("need at least 7 samples, got {n}")));
    }
    let mut sign = 0.0;
    for (p, a) in trace.samples.iter().zip(&trace.accel) {
        let g = p.vx * a[1] - p.vy * a[0];
        if g.abs() < 1e-10 {
            return Err(Error::DegenerateCurve(format!("det(v, a) = {g:e} at s = {}", p.s)));
        }
        if sign == 0.0 {
            sign = g.signum();
        } else if g.signum() != sign {
            return Err(Error::DegenerateCurve(format!("inflection near s = {}", p.s)));
        }
    }
    let segs: Vec<Segment> = (0..n - 1).map(|i| Segment::new(trace, i)).collect();
    let mut sigma = vec![0.0];
    for (i, seg) in segs.iter().enumerate() {
        let next = sigma[i] + seg.arc(trace.samples[i + 1].s);
        sigma.push(next);
    }
    let total = sigma[n - 1];
    let step = (total / 20.0).min(0.02);
    let m = (total / step).floor() as usize;
    // position at a given affine arc length
    let position = |target: f64| -> [f64; 2] {
        let i = match sigma.binary_search_by(|v| v.total_cmp(&target)) {
            Ok(i) => i.min(n - 2),
            Err(i) => (i.max(1) - 1).min(n - 2),
        };
        let seg = &segs[i];
        let (lo, hi) = (trace.samples[i].s, trace.samples[i + 1].s);
        let mut s = lo + (hi - lo) * ((target - sigma[i]) / (sigma[i + 1] - sigma[i])).clamp(0.0, 1.0);
        for _ in 0..30 {
            let f = sigma[i] + seg.arc(s) - target;
            let ds = f / seg.density(s);
            s = (s - ds).clamp(lo, hi);
            if ds.abs() < 1e-15 * (1.0 + s.abs()) {
                break;
            }
        }
        seg.eval(s).0
    };
    let grid: Vec<[f64; 2]> = (0..=m).map(|k| position(k as f64 * step)).collect();
    let h2 = 12.0 * step * step;
    let h3 = 2.0 * step.powi(3);
    let mut est: Vec<f64> = (2..grid.len().saturating_sub(2))
        .map(|k| {
            let f = |d: usize| {
                let (m2, m1, z, p1, p2) = (grid[k - 2][d], grid[k - 1][d], grid[k][d], grid[k + 1][d], grid[k + 2][d]);
                let second = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / h2;
                let third = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / h3;
                (second, third)
            };
            let (xs, xt) = f(0);
            let (ys, yt) = f(1);
            sign * det([xs, ys], [xt, yt])
        })
        .collect();
    if est.is_empty() {
        return Err(Error::DegenerateCurve("trace too short".into()));
    }
    est.sort_by(f64::total_cmp);
    let k = est.len();
    Ok(if k % 2 == 1 { est[k / 2] } else { 0.5 * (est[k / 2 - 1] + est[k / 2]) })
}
