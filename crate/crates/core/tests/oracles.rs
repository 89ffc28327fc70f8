//! Values cross-checked against computations that do not share code with the
//! routine under test: finite differences, direct frame algebra, hand expansion.

use quasihom::affine::{
    act_automorphism, find_markings, third_marking_invariants, LeftInvariantConnection,
};
use quasihom::catalog::{
    curvature_locus_is_axis, equivalent_params, generators, make_normal_form, scale_params,
    ParamClass,
};
use quasihom::connection::Connection;
use quasihom::geodesics::{
    affine_curvature_estimate, integrate_geodesic, GeodesicTrace, Sample, TraceStatus,
};
use quasihom::gluing::{affine_frames, builtin_map, left_invariant_symbols, BuiltinMap};
use quasihom::killing::structure_constants;
use quasihom::{int, rat, Error, MonoTriMap, PuiseuxPoly, Rational, VectorField2};

const H: f64 = 1e-4;

/// `Γ^k_ij` from the packed `[A, B, C, D, E, F]` values.
fn gamma(g: &[f64; 6], k: usize, i: usize, j: usize) -> f64 {
    let slot = match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (0, 1) => 2,
        _ => 4,
    };
    g[slot + k]
}

/// Component `k` of `R(∂x, ∂y)∂j` by central differences.
fn fd_curvature(conn: &Connection, x: f64, y: f64) -> [[f64; 2]; 2] {
    let g = conn.eval_f64(x, y).unwrap();
    let gxp = conn.eval_f64(x + H, y).unwrap();
    let gxm = conn.eval_f64(x - H, y).unwrap();
    let gyp = conn.eval_f64(x, y + H).unwrap();
    let gym = conn.eval_f64(x, y - H).unwrap();
    let mut r = [[0.0; 2]; 2];
    for k in 0..2 {
        for j in 0..2 {
            let dx = (gamma(&gxp, k, 1, j) - gamma(&gxm, k, 1, j)) / (2.0 * H);
            let dy = (gamma(&gyp, k, 0, j) - gamma(&gym, k, 0, j)) / (2.0 * H);
            let quad: f64 = (0..2)
                .map(|m| gamma(&g, k, 0, m) * gamma(&g, m, 1, j) - gamma(&g, k, 1, m) * gamma(&g, m, 0, j))
                .sum();
            r[k][j] = dx - dy + quad;
        }
    }
    r
}

#[test]
fn curvature_matches_finite_differences() {
    let conns = [
        make_normal_form(&ParamClass::type_iii(int(1), int(0))).unwrap(),
        make_normal_form(&ParamClass::type_i(int(2), rat(3, 4), rat(-3, 4), rat(-3, 4))).unwrap(),
        make_normal_form(&ParamClass::type_ii0(int(3), int(1), int(2), int(-1))).unwrap(),
    ];
    for conn in &conns {
        let m = conn.curvature().matrix();
        for (x, y) in [(0.7, -0.3), (1.3, 0.4), (0.5, 1.1)] {
            let fd = fd_curvature(conn, x, y);
            for k in 0..2 {
                for j in 0..2 {
                    let exact = m[k][j].eval_f64(x, y).unwrap();
                    assert!((exact - fd[k][j]).abs() < 1e-5 * (1.0 + exact.abs()), "{exact} vs {}", fd[k][j]);
                }
            }
        }
    }
    // Type III(1, 0) at the origin: R(∂x, ∂y) = -3 Id
    let c = &conns[0];
    let fd = fd_curvature(c, 0.0, 0.0);
    let m = c.curvature().matrix();
    for k in 0..2 {
        for j in 0..2 {
            let exact = m[k][j].eval_exact(&int(0), &int(0)).unwrap();
            assert_eq!(exact, if k == j { int(-3) } else { int(0) });
            assert!((fd[k][j] - quasihom::algebra::rational::to_f64(&exact)).abs() < 1e-7, "{fd:?}");
        }
    }
}

#[test]
fn curvature_locus_of_type_ii3() {
    let conn = make_normal_form(&ParamClass::type_ii0(int(3), int(0), int(0), int(1))).unwrap();
    assert!(curvature_locus_is_axis(&conn));
    for y in [-1.0, 0.2, 2.5] {
        assert!(fd_curvature(&conn, 0.0, y).iter().flatten().all(|v| v.abs() < 1e-7));
    }
    assert!(fd_curvature(&conn, 0.8, 0.2).iter().flatten().any(|v| v.abs() > 1e-3));
}

/// `Γ'^m_ij = (J⁻¹)^m_k (∂i∂j F^k + Γ^k_ab(F) J^a_i J^b_j)` with `J` and the
/// Hessian from finite differences of the map.
fn fd_pullback(conn: &Connection, f: &MonoTriMap, x: f64, y: f64) -> [f64; 6] {
    let ev = |a: f64, b: f64| {
        let (u, v) = f.apply_f64(a, b).unwrap();
        [u, v]
    };
    let e = [[1.0, 0.0], [0.0, 1.0]];
    let at = |i: usize, s: f64, j: usize, t: f64| {
        ev(x + s * e[i][0] + t * e[j][0], y + s * e[i][1] + t * e[j][1])
    };
    let mut jac = [[0.0; 2]; 2];
    for i in 0..2 {
        let (p, m) = (at(i, H, 0, 0.0), at(i, -H, 0, 0.0));
        for k in 0..2 {
            jac[k][i] = (p[k] - m[k]) / (2.0 * H);
        }
    }
    let mut hess = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let (pp, pm, mp, mm) = (at(i, H, j, H), at(i, H, j, -H), at(i, -H, j, H), at(i, -H, j, -H));
            for k in 0..2 {
                hess[k][i][j] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * H * H);
            }
        }
    }
    let q = ev(x, y);
    let g = conn.eval_f64(q[0], q[1]).unwrap();
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
    let mut out = [0.0; 6];
    for (slot, (i, j)) in [(0, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        for m in 0..2 {
            let mut acc = 0.0;
            for k in 0..2 {
                let mut t = hess[k][i][j];
                for a in 0..2 {
                    for b in 0..2 {
                        t += gamma(&g, k, a, b) * jac[a][i] * jac[b][j];
                    }
                }
                acc += inv[m][k] * t;
            }
            out[2 * slot + m] = acc;
        }
    }
    out
}

#[test]
fn pullback_matches_transformation_law() {
    let base = make_normal_form(&ParamClass::type_i(int(2), int(1), rat(-1, 2), int(2))).unwrap();
    let ii = make_normal_form(&ParamClass::type_ii1(int(3), int(1), int(1), int(-1))).unwrap();
    let maps = [
        (&base, builtin_map(BuiltinMap::Sigma).unwrap()),
        (&base, builtin_map(BuiltinMap::Beta).unwrap()),
        (&ii, builtin_map(BuiltinMap::Rho).unwrap()),
        (&base, builtin_map(BuiltinMap::Psi2(2)).unwrap()),
        (&ii, builtin_map(BuiltinMap::Psi1(3)).unwrap()),
        (&base, MonoTriMap::new(int(2), int(1), rat(1, 3), int(1), PuiseuxPoly::x().pow(2)).unwrap()),
    ];
    for (conn, f) in maps {
        let pulled = conn.pullback(&f).unwrap();
        for (x, y) in [(0.8, 0.3), (1.4, -0.6)] {
            let exact = pulled.eval_f64(x, y).unwrap();
            let fd = fd_pullback(conn, &f, x, y);
            for (a, b) in exact.iter().zip(fd) {
                assert!((a - b).abs() < 1e-5 * (1.0 + a.abs()), "{f}: {exact:?} vs {fd:?}");
            }
        }
    }
}

#[test]
fn sigma_maps_geodesics_to_geodesics() {
    let conn = make_normal_form(&ParamClass::type_i(int(2), rat(3, 4), rat(-3, 4), rat(-3, 4))).unwrap();
    let a = integrate_geodesic(&conn, (0.4, 0.1), (0.3, -0.2), 1.5, 1e-11).unwrap();
    let b = integrate_geodesic(&conn, (-0.4, 0.1), (-0.3, -0.2), 1.5, 1e-11).unwrap();
    for k in 0..=30 {
        let s = 0.05 * k as f64;
        let (p, q) = (a.interpolate(s).unwrap(), b.interpolate(s).unwrap());
        assert!((p.x + q.x).abs() < 1e-8 && (p.y - q.y).abs() < 1e-8, "s = {s}");
    }
}

#[test]
fn whole_plane_trace_never_leaves_domain() {
    let conn = make_normal_form(&ParamClass::type_i(int(2), rat(3, 4), rat(-3, 4), rat(-3, 4))).unwrap();
    let t = integrate_geodesic(&conn, (0.2, 0.0), (-1.0, 0.1), 1.0, 1e-9).unwrap();
    assert!(!matches!(t.status, TraceStatus::LeftDomain(_)));
    assert!(t.samples.iter().any(|p| p.x < 0.0));
}

#[test]
fn generators_commute_with_centralizer_numerically() {
    let p = ParamClass::type_ii0(int(3), int(1), int(2), int(-1));
    let g = generators(&p).unwrap();
    let (x, a) = (&g.centralizer[0], &g.killing[0]);
    assert!(x.bracket(a).is_zero());
    // [X, A] = X(A) - A(X) by differences of the float components
    let (px, py) = (0.9, 0.4);
    let d = |f: &VectorField2, k: usize, dir: usize| {
        let (ex, ey) = if dir == 0 { (H, 0.0) } else { (0.0, H) };
        (f.eval_f64(px + ex, py + ey).unwrap()[k] - f.eval_f64(px - ex, py - ey).unwrap()[k]) / (2.0 * H)
    };
    let (xv, av) = (x.eval_f64(px, py).unwrap(), a.eval_f64(px, py).unwrap());
    for k in 0..2 {
        let br = xv[0] * d(a, k, 0) + xv[1] * d(a, k, 1) - av[0] * d(x, k, 0) - av[1] * d(x, k, 1);
        assert!(br.abs() < 1e-7, "{br}");
    }
}

#[test]
fn bracket_leaving_the_span() {
    let fields = [VectorField2::dx(), VectorField2::new(PuiseuxPoly::zero(), PuiseuxPoly::x().pow(2))];
    // [∂x, x²∂y] = 2x∂y, not a combination of ∂x and x²∂y
    let br = fields[0].bracket(&fields[1]);
    assert_eq!(br, VectorField2::new(PuiseuxPoly::zero(), PuiseuxPoly::x().scale(&int(2))));
    assert_eq!(structure_constants(&fields), Err(Error::NotClosed { i: 0, j: 1 }));
}

#[test]
fn half_integer_sign_classes_differ() {
    let p = ParamClass::type_i(rat(1, 2), int(0), int(0), int(1));
    let q = ParamClass::type_i(rat(1, 2), int(0), int(0), int(-1));
    // μ²ε keeps the sign of ε for every real μ
    for mu in [int(1), int(-1), rat(1, 3), int(-5)] {
        assert_ne!(scale_params(&p, &mu).unwrap().epsilon, q.epsilon);
    }
    assert!(!equivalent_params(&p, &q).unwrap());
}

/// Coefficients `(a, b)` of a left-invariant field `a X0 + b Y0` in the chart.
fn frame_coords(w: &VectorField2) -> (Rational, Rational) {
    let u = PuiseuxPoly::x();
    let a = w.component(0).div_by(&u).unwrap().as_constant().unwrap();
    let b = -w.component(1).div_by(&u).unwrap().as_constant().unwrap();
    (a, b)
}

/// Sextuple in the frame `(X0 + λY0, μY0)` by direct covariant differentiation.
fn sextuple_in_frame(l: &LeftInvariantConnection, lam: &Rational, mu: &Rational) -> LeftInvariantConnection {
    let conn = left_invariant_symbols(l);
    let [x0, y0, _] = affine_frames();
    let x = &x0 + &y0.scale(lam);
    let y = y0.scale(mu);
    // a X0 + b Y0 = a X + (b - aλ)/μ Y
    let split = |w: VectorField2| {
        let (a, b) = frame_coords(&w);
        let c = (b - &a * lam) / mu;
        (a, c)
    };
    let (alpha, beta) = split(conn.covariant_derivative(&x, &x));
    let (gamma, delta) = split(conn.covariant_derivative(&x, &y));
    let (epsilon, phi) = split(conn.covariant_derivative(&y, &y));
    LeftInvariantConnection { alpha, beta, gamma, delta, epsilon, phi }
}

fn example() -> LeftInvariantConnection {
    LeftInvariantConnection::new([rat(-1, 2), int(0), rat(3, 4), int(1), rat(-3, 4), rat(-3, 4)])
}

#[test]
fn automorphism_action_matches_frame_change() {
    let ex = example();
    assert_eq!(sextuple_in_frame(&ex, &int(0), &int(1)), ex);
    let moved = act_automorphism(&ex, &int(2), &int(2)).unwrap();
    let expect = LeftInvariantConnection::new([rat(-1, 2), int(0), rat(-3, 2), int(1), int(-3), rat(3, 2)]);
    assert_eq!(moved, expect);
    assert_eq!(sextuple_in_frame(&ex, &int(2), &int(2)), expect);
    let other = LeftInvariantConnection::new([rat(1, 3), int(2), int(-1), rat(5, 4), int(3), rat(-2, 7)]);
    for (lam, mu) in [(int(-1), int(3)), (rat(1, 2), rat(-2, 5))] {
        assert_eq!(act_automorphism(&other, &lam, &mu).unwrap(), sextuple_in_frame(&other, &lam, &mu));
    }
}

#[test]
fn marking_cubics_factor() {
    let expand = |k: Rational, roots: [Rational; 3]| {
        // k λ (λ - r1)(λ - r2) with r0 = 0, ascending coefficients
        let [_, r1, r2] = roots;
        [int(0), &k * &r1 * &r2, -(&k * (&r1 + &r2)), k]
    };
    let ex = example();
    let c = ex.marking_cubic();
    let f = expand(rat(3, 4), [int(0), int(1), int(2)]);
    assert!(c.iter().zip(&f).all(|(a, b)| a == &-b.clone()) || c == f);
    assert_eq!(find_markings(&ex).unwrap().exact_lambdas(), vec![int(0), int(1), int(2)]);

    let sol = LeftInvariantConnection::new([rat(-1, 2), int(0), rat(-3, 2), int(1), int(-3), rat(3, 2)]);
    let c = sol.marking_cubic();
    // (3/2) λ (1 + λ)(1 + 2λ) = 3λ (λ + 1)(λ + 1/2)
    let f = expand(int(3), [int(0), int(-1), rat(-1, 2)]);
    assert!(c.iter().zip(&f).all(|(a, b)| a == &-b.clone()) || c == f);
    assert_eq!(find_markings(&sol).unwrap().exact_lambdas(), vec![int(-1), rat(-1, 2), int(0)]);
}

#[test]
fn third_marking_by_covariant_derivative() {
    let ex = example();
    // the third marking of the example is X0 + Y0
    let conn = left_invariant_symbols(&ex);
    let [x0, y0, _] = affine_frames();
    let z = &x0 + &y0;
    let (a, b) = frame_coords(&conn.covariant_derivative(&z, &z));
    // ∇_Z Z = a X0 + b Y0 must be parallel to Z
    assert_eq!(a, b);
    let (c, d) = frame_coords(&conn.covariant_derivative(&z, &y0));
    let delta_m = d - c;
    assert_eq!((a.clone(), delta_m.clone()), (rat(1, 4), rat(1, 4)));
    let got = third_marking_invariants(&rat(-1, 2), &rat(-1, 2), &int(1), &int(1)).unwrap();
    assert_eq!(got, (a, delta_m));
}

#[test]
fn two_type_ii_markings() {
    let a = rat(-1, 3);
    let d = int(1) + &a;
    let (a2, d2) = third_marking_invariants(&a, &a, &d, &d).unwrap();
    assert_eq!(d2, (a2 + int(1)) / int(3));
}

fn exact_trace(f: impl Fn(f64) -> ([f64; 2], [f64; 2], [f64; 2]), s_end: f64) -> GeodesicTrace {
    let n = 200;
    let mut samples = Vec::new();
    let mut accel = Vec::new();
    for k in 0..=n {
        let s = s_end * k as f64 / n as f64;
        let (p, v, a) = f(s);
        samples.push(Sample { s, x: p[0], y: p[1], vx: v[0], vy: v[1] });
        accel.push(a);
    }
    GeodesicTrace { samples, accel, status: TraceStatus::Completed }
}

#[test]
fn affine_curvature_of_exact_conics() {
    // ellipse with semi-axes a, b: (ab)^(-2/3); hyperbola: -(ab)^(-2/3)
    for (a, b) in [(1.0f64, 1.0f64), (2.0, 1.0), (0.5, 3.0)] {
        let want = (a * b).powf(-2.0 / 3.0);
        let e = exact_trace(|s| ([a * s.cos(), b * s.sin()], [-a * s.sin(), b * s.cos()], [-a * s.cos(), -b * s.sin()]), 6.0);
        let k = affine_curvature_estimate(&e).unwrap();
        assert!((k - want).abs() < 1e-3 * want, "ellipse {a},{b}: {k} vs {want}");
        let h = exact_trace(|s| ([a * s.cosh(), b * s.sinh()], [a * s.sinh(), b * s.cosh()], [a * s.cosh(), b * s.sinh()]), 2.0);
        let k = affine_curvature_estimate(&h).unwrap();
        assert!((k + want).abs() < 1e-3 * want, "hyperbola {a},{b}: {k} vs {}", -want);
    }
}
