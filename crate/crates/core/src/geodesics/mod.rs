//! Numerical geodesics `x''^k + Γ^k_ij x'^i x'^j = 0`.

mod curvature;
mod rk;

pub use curvature::affine_curvature_estimate;

use std::fmt::Write as _;

use num_traits::Zero;

use crate::algebra::rational::{int, is_integer, to_f64};
use crate::algebra::{PuiseuxPoly, Rational};
use crate::catalog::type_iii_params;
use crate::connection::{Connection, Domain};
use crate::error::{Error, Result};
use rk::{step_factor, try_step, State, StepOutcome};

/// Float evaluator for one Christoffel symbol.
#[derive(Clone, Debug)]
struct FastPoly {
    terms: Vec<(f64, XPow, i32)>,
}

#[derive(Clone, Copy, Debug)]
enum XPow {
    Int(i32),
    Real(f64),
}

impl FastPoly {
    fn new(p: &PuiseuxPoly) -> Self {
        let terms = p
            .terms()
            .map(|(c, xe, ye)| {
                let xp = if is_integer(xe) {
                    XPow::Int(to_f64(xe) as i32)
                } else {
                    XPow::Real(to_f64(xe))
                };
                (to_f64(c), xp, ye as i32)
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(c, xp, ye)| {
                let xv = match xp {
                    XPow::Int(k) => x.powi(*k),
                    XPow::Real(r) => x.powf(*r),
                };
                c * xv * y.powi(*ye)
            })
            .sum()
    }
}

/// Right-hand side of the first-order geodesic system on `(x, y, vx, vy)`.
#[derive(Clone, Debug)]
pub struct GeodesicField {
    sym: Vec<FastPoly>,
    domain: Domain,
}

impl GeodesicField {
    pub fn new(conn: &Connection) -> Self {
        Self {
            sym: conn.symbols().iter().map(FastPoly::new).collect(),
            domain: conn.domain(),
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Acceleration `-Γ(v, v)` at `(x, y)`, or `None` outside the domain.
    pub fn acceleration(&self, x: f64, y: f64, vx: f64, vy: f64) -> Option<[f64; 2]> {
        if !self.domain.contains(x) {
            return None;
        }
        let g: Vec<f64> = self.sym.iter().map(|p| p.eval(x, y)).collect();
        let (xx, xy, yy) = (vx * vx, 2.0 * vx * vy, vy * vy);
        let ax = -(g[0] * xx + g[2] * xy + g[4] * yy);
        let ay = -(g[1] * xx + g[3] * xy + g[5] * yy);
        (ax.is_finite() && ay.is_finite()).then_some([ax, ay])
    }

    fn rhs(&self, st: &State) -> Option<State> {
        let [ax, ay] = self.acceleration(st[0], st[1], st[2], st[3])?;
        Some([st[2], st[3], ax, ay])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceStatus {
    Completed,
    Blowup(f64),
    LeftDomain(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl Sample {
    /// `x vy - y vx`.
    pub fn u(&self) -> f64 {
        self.x * self.vy - self.y * self.vx
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicTrace {
    pub samples: Vec<Sample>,
    /// Accelerations `(ax, ay)` at each sample.
    pub accel: Vec<[f64; 2]>,
    pub status: TraceStatus,
}

#[derive(Clone, Copy, Debug)]
pub struct GeodesicOptions {
    pub tol: f64,
    /// Upper bound on the step size; also the spacing of recorded samples at most.
    pub max_step: f64,
    /// Declared blow-up once the state norm exceeds this.
    pub blowup_norm: f64,
    /// The trace ends once the step size falls below this fraction of
    /// `min(s_max, 1)`; near a singularity steps become round-off limited.
    pub min_step_rel: f64,
    pub max_steps: usize,
}

impl GeodesicOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            max_step: f64::INFINITY,
            blowup_norm: 1e12,
            min_step_rel: 1e-9,
            max_steps: 5_000_000,
        }
    }

    pub fn with_max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }
}

fn norm(st: &State) -> f64 {
    st.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Integrates the geodesic through `p0` with velocity `v0` up to `s_max`.
pub fn integrate_geodesic(
    conn: &Connection,
    p0: (f64, f64),
    v0: (f64, f64),
    s_max: f64,
    tol: f64,
) -> Result<GeodesicTrace> {
    integrate_geodesic_with(conn, p0, v0, s_max, GeodesicOptions::new(tol))
}

pub fn integrate_geodesic_with(
    conn: &Connection,
    p0: (f64, f64),
    v0: (f64, f64),
    s_max: f64,
    opts: GeodesicOptions,
) -> Result<GeodesicTrace> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParams("tol must be positive".into()));
    }
    if !(s_max > 0.0) || !s_max.is_finite() {
        return Err(Error::InvalidParams("s_max must be positive and finite".into()));
    }
    let field = GeodesicField::new(conn);
    let mut y: State = [p0.0, p0.1, v0.0, v0.1];
    let mut dy = field.rhs(&y).ok_or_else(|| {
        Error::Domain(format!(
            "start ({}, {}) outside the {} domain",
            p0.0,
            p0.1,
            conn.domain().as_str()
        ))
    })?;
    let rhs = |_s: f64, st: &State| field.rhs(st);
    let mut samples = vec![Sample { s: 0.0, x: y[0], y: y[1], vx: y[2], vy: y[3] }];
    let mut accel = vec![[dy[2], dy[3]]];
    let min_step = opts.min_step_rel * s_max.min(1.0);
    let mut s = 0.0;
    let mut h = (0.01 * s_max).min(opts.max_step).min(0.01);
    let mut status = TraceStatus::Completed;
    let mut steps = 0;
    while s < s_max {
        steps += 1;
        if steps > opts.max_steps {
            status = TraceStatus::Blowup(s);
            break;
        }
        let last = s_max - s <= h;
        let hh = if last { s_max - s } else { h };
        match try_step(&rhs, s, &y, &dy, hh, opts.tol) {
            StepOutcome::Accepted { y: ny, dy: ndy, err } => {
                s = if last { s_max } else { s + hh };
                y = ny;
                dy = ndy;
                samples.push(Sample { s, x: y[0], y: y[1], vx: y[2], vy: y[3] });
                accel.push([dy[2], dy[3]]);
                if norm(&y) > opts.blowup_norm {
                    status = TraceStatus::Blowup(s);
                    break;
                }
                h = (hh * step_factor(err)).min(opts.max_step);
                if !last && h < min_step {
                    status = TraceStatus::Blowup(s);
                    break;
                }
            }
            StepOutcome::Rejected { err } => {
                h = hh * step_factor(err);
                if h < min_step {
                    status = TraceStatus::Blowup(s);
                    break;
                }
            }
            StepOutcome::Failed => {
                h = hh * 0.25;
                if h < min_step {
                    status = if field.domain() == Domain::RightHalfPlane {
                        TraceStatus::LeftDomain(s)
                    } else {
                        TraceStatus::Blowup(s)
                    };
                    break;
                }
            }
        }
    }
    Ok(GeodesicTrace { samples, accel, status })
}

impl GeodesicTrace {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trace is never empty")
    }

    /// State at `s` by quintic Hermite interpolation between samples.
    pub fn interpolate(&self, s: f64) -> Option<Sample> {
        let n = self.samples.len();
        if n == 0 || s < self.samples[0].s || s > self.samples[n - 1].s {
            return None;
        }
        let i = match self.samples.binary_search_by(|p| p.s.total_cmp(&s)) {
            Ok(i) => return Some(self.samples[i]),
            Err(i) => i - 1,
        };
        let seg = curvature::Segment::new(self, i);
        let (p, v, _) = seg.eval(s);
        Some(Sample { s, x: p[0], y: p[1], vx: v[0], vy: v[1] })
    }

    /// Rows `s,x,y,vx,vy,u` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,x,y,vx,vy,u\n");
        for p in &self.samples {
            let _ = writeln!(out, "{},{},{},{},{},{}", p.s, p.x, p.y, p.vx, p.vy, p.u());
        }
        out
    }

    /// Standalone SVG with the trace as a polyline.
    pub fn to_svg(&self) -> String {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &self.samples {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        let pad = 0.05 * span;
        let size = 512.0;
        let scale = size / (span + 2.0 * pad);
        let mut pts = String::new();
        for p in &self.samples {
            let px = (p.x - x0 + pad) * scale;
            let py = size - (p.y - y0 + pad) * scale;
            let _ = write!(pts, "{px:.3},{py:.3} ");
        }
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
             <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"{}\"/>\n\
             </svg>\n",
            pts.trim_end()
        )
    }
}

/// Comparison of `u = x vy - y vx` with `u0 / (1 - 2γ u0 s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicInvariantCheck {
    pub gamma: Rational,
    pub u0: f64,
    /// Largest `|u(s) - u0/(1 - 2γu0 s)|` over the compared window.
    pub max_abs_dev: f64,
    /// Largest `|u(s)(1 - 2γu0 s) - u0|` over the same window.
    pub max_residual: f64,
    /// `1/(2γu0)` when `γu0 > 0`.
    pub blowup_predicted: Option<f64>,
    /// End of the compared window (80% of the predicted blow-up when there is one).
    pub window_end: f64,
}

/// Checks the `u`-law along a Type III geodesic trace.
pub fn conic_invariant_check(conn: &Connection, trace: &GeodesicTrace) -> Result<ConicInvariantCheck> {
    let (gamma, _) = type_iii_params(conn)
        .ok_or_else(|| Error::InvalidParams("connection is not of Type III".into()))?;
    let u0 = trace.samples[0].u();
    if u0.abs() < 1e-14 {
        return Err(Error::NotTransverse);
    }
    let g = to_f64(&gamma);
    let blowup_predicted = (g * u0 > 0.0).then(|| 1.0 / (2.0 * g * u0));
    let window_end = blowup_predicted.map_or(f64::INFINITY, |b| 0.8 * b);
    let (mut dev, mut res) = (0.0f64, 0.0f64);
    for p in trace.samples.iter().filter(|p| p.s <= window_end) {
        let den = 1.0 - 2.0 * g * u0 * p.s;
        let u = p.u();
        dev = dev.max((u - u0 / den).abs());
        res = res.max((u * den - u0).abs());
    }
    Ok(ConicInvariantCheck {
        gamma,
        u0,
        max_abs_dev: dev,
        max_residual: res,
        blowup_predicted,
        window_end,
    })
}

/// `k = -ε/2` for the complete Type III connection, certified against
/// `∇_{∂x}∂x = k y² E`, `∇_{∂x}∂y = -k x y E`, `∇_{∂y}∂y = k x² E` with `E = x∂x + y∂y`.
pub fn sl2_form_constant(gamma: &Rational, epsilon: &Rational) -> Result<Rational> {
    if !gamma.is_zero() {
        return Err(Error::NotComplete(crate::algebra::rational::fmt_rat(gamma)));
    }
    let k = -epsilon / int(2);
    let t = |c: Rational, xe: i64, ye: u32| PuiseuxPoly::term(c, int(xe), ye);
    let display = [
        t(k.clone(), 1, 2),
        t(k.clone(), 0, 3),
        t(-k.clone(), 2, 1),
        t(-k.clone(), 1, 2),
        t(k.clone(), 3, 0),
        t(k.clone(), 2, 1),
    ];
    let conn = crate::catalog::make_normal_form(&crate::catalog::ParamClass::type_iii(
        gamma.clone(),
        epsilon.clone(),
    ))?;
    if conn.symbols() != &display {
        return Err(Error::Inconsistent("Type III symbols differ from the invariant form".into()));
    }
    Ok(k)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    Complete,
    Blowup(f64),
    LeftDomain(f64),
}

/// Integrates every initial state to `s_max` and reports how each ended.
pub fn completeness_probe(
    conn: &Connection,
    grid: &[((f64, f64), (f64, f64))],
    s_max: f64,
    tol: f64,
) -> Vec<Verdict> {
    grid.iter()
        .map(|&(p0, v0)| match integrate_geodesic(conn, p0, v0, s_max, tol) {
            Ok(t) => match t.status {
                TraceStatus::Completed => Verdict::Complete,
                TraceStatus::Blowup(s) => Verdict::Blowup(s),
                TraceStatus::LeftDomain(s) => Verdict::LeftDomain(s),
            },
            Err(_) => Verdict::LeftDomain(0.0),
        })
        .collect()
}
