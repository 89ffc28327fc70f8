use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use quasihom::affine::{find_markings, solve_two_markings, third_marking_invariants, MarkingKind};
use quasihom::algebra::rational::{fmt_rat, to_f64};
use quasihom::catalog::{
    canonicalize, curvature_locus_is_axis, equivalent_params, example_self_derivative_holds,
    example_stated_relations, exceptional_killing_field, generators, make_example_torus,
    scale_params, type_iii_params, ParamClass,
};
use quasihom::connection::Connection;
use quasihom::geodesics::{
    affine_curvature_estimate, conic_invariant_check, integrate_geodesic, TraceStatus,
};
use quasihom::gluing::{atlas_report, build_model_atlas, builtin_map, verify_atlas, BuiltinMap};
use quasihom::io::{
    atlas_report_to_json, jet_report_to_json, parse_connection_document, parse_field_document,
    parse_rational_str, parse_sextuple_document, sextuple_to_json, to_pretty, ConnectionDocument,
};
use quasihom::killing::{jet_killing_dimension, killing_residuals};
use quasihom::{Rational, VectorField2};

#[derive(Parser)]
#[command(name = "quasihom", version, about = "Quasihomogeneous affine connections on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Report)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Report,
    Json,
    Csv,
    SvgPlot,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a connection document
    #[command(subcommand)]
    Conn(ConnCmd),
    /// Killing fields
    #[command(subcommand)]
    Killing(KillingCmd),
    /// Integrate a geodesic
    Geodesic(GeodesicArgs),
    /// Compare or rescale normal-form parameters
    Equiv(EquivArgs),
    /// Left-invariant connections on the affine group
    #[command(subcommand)]
    Affine(AffineCmd),
    /// Global model atlas
    #[command(subcommand)]
    Glue(GlueCmd),
    /// The torus example
    #[command(subcommand)]
    Example(ExampleCmd),
}

#[derive(Args)]
struct ConnArg {
    /// Connection document (JSON)
    #[arg(long)]
    conn: PathBuf,
}

#[derive(Subcommand)]
enum ConnCmd {
    Show(ConnArg),
    Curvature {
        #[command(flatten)]
        conn: ConnArg,
        /// Check that the curvature vanishes exactly on x = 0
        #[arg(long)]
        locus_check: bool,
    },
}

#[derive(Subcommand)]
enum KillingCmd {
    /// Check Killing residuals of the given fields, or of the normal-form generators
    Verify {
        #[command(flatten)]
        conn: ConnArg,
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Jet-prolongation dimension of the Killing algebra at a point
    Dim {
        #[command(flatten)]
        conn: ConnArg,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
        at: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_order: u32,
    },
}

#[derive(Args)]
struct GeodesicArgs {
    #[command(flatten)]
    conn: ConnArg,
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
    p0: String,
    #[arg(long, value_name = "VX,VY", allow_hyphen_values = true)]
    v0: String,
    #[arg(long)]
    smax: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct EquivArgs {
    #[command(flatten)]
    conn: ConnArg,
    /// Second normal-form document
    #[arg(long)]
    other: Option<PathBuf>,
    /// Scale factor NUM/DEN applied to the first document
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    I0,
    II0,
}

impl From<Kind> for MarkingKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::I0 => MarkingKind::I0,
            Kind::II0 => MarkingKind::II0,
        }
    }
}

#[derive(Subcommand)]
enum AffineCmd {
    /// Markings of a sextuple document
    Markings {
        #[arg(long)]
        sextuple: PathBuf,
    },
    /// Connection with markings of the given types at X0 and X0 - Y0
    Solve {
        #[arg(long, value_enum)]
        kind1: Kind,
        #[arg(long, allow_hyphen_values = true)]
        n1: String,
        #[arg(long, value_enum)]
        kind2: Kind,
        #[arg(long, allow_hyphen_values = true)]
        n2: String,
    },
}

#[derive(Subcommand)]
enum GlueCmd {
    Verify {
        #[arg(long)]
        n1: i64,
        #[arg(long)]
        n2: i64,
        #[arg(long, default_value_t = 1)]
        window: u32,
    },
}

#[derive(Subcommand)]
enum ExampleCmd {
    Verify,
}

struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Self { text, ok: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_doc(path: &Path) -> Result<ConnectionDocument> {
    parse_connection_document(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_conn(path: &Path) -> Result<(ConnectionDocument, Connection)> {
    let doc = load_doc(path)?;
    let conn = doc.connection()?;
    Ok((doc, conn))
}

fn pair(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected two comma-separated numbers, got {s:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn rational(s: &str) -> Result<Rational> {
    Ok(parse_rational_str(s)?)
}

fn require_report(format: Format, allowed: &[Format]) -> Result<()> {
    if format != Format::Report && !allowed.contains(&format) {
        bail!("this command does not support the requested --format");
    }
    Ok(())
}

fn conn_show(path: &Path) -> Result<Outcome> {
    let (doc, conn) = load_conn(path)?;
    let mut text = String::new();
    if let Some(p) = doc.params() {
        text.push_str(&format!("normal form: {}\n", p.label()));
    }
    text.push_str(&conn.to_string());
    text.push_str(&format!("torsion-free: {}\n", conn.torsion_check()));
    Ok(Outcome::pass(text))
}

fn conn_curvature(path: &Path, locus: bool) -> Result<Outcome> {
    let (_, conn) = load_conn(path)?;
    let r = conn.curvature();
    let mut text = format!("{r}");
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text.push_str(&format!("flat: {}\n", r.is_zero()));
    let mut ok = true;
    if locus {
        let axis = curvature_locus_is_axis(&conn);
        text.push_str(&format!("vanishes on x=0: {axis}\n"));
        ok = axis;
    }
    Ok(Outcome { text, ok })
}

fn killing_verify(path: &Path, field: Option<&Path>) -> Result<Outcome> {
    let (doc, conn) = load_conn(path)?;
    let fields: Vec<VectorField2> = match (field, doc.params()) {
        (Some(f), _) => parse_field_document(&read(f)?)?,
        (None, Some(p)) => {
            let mut v = generators(p)?.killing;
            v.extend(exceptional_killing_field(p));
            v
        }
        (None, None) => bail!("a custom connection needs --field"),
    };
    let mut text = String::new();
    let mut ok = true;
    for (i, v) in fields.iter().enumerate() {
        let res = killing_residuals(&conn, v);
        let zero = res.is_zero();
        ok &= zero;
        text.push_str(&format!("field {i}: {v}\n  killing: {zero}\n"));
        if !zero {
            for (k, r) in res.r.iter().enumerate() {
                if !r.is_zero() {
                    text.push_str(&format!("  residual {}: {r}\n", k + 1));
                }
            }
        }
    }
    text.push_str(&format!("all killing: {ok}\n"));
    Ok(Outcome { text, ok })
}

fn killing_dim(path: &Path, at: &[String], max_order: u32, format: Format) -> Result<Outcome> {
    require_report(format, &[Format::Json])?;
    let (_, conn) = load_conn(path)?;
    let point = match at {
        [x, y] => (rational(x)?, rational(y)?),
        [] => (Rational::from_integer(1.into()), Rational::from_integer(0.into())),
        _ => bail!("--at takes two values"),
    };
    let r = jet_killing_dimension(&conn, point, max_order)?;
    if format == Format::Json {
        return Ok(Outcome::pass(to_pretty(&jet_report_to_json(&r))));
    }
    let mut text = format!("point: ({}, {})\n", fmt_rat(&r.point.0), fmt_rat(&r.point.1));
    for (o, d) in &r.dims {
        text.push_str(&format!("order {o}: {d}\n"));
    }
    text.push_str(&format!(
        "stabilized: {}\nfinal_dim: {}\napproximate: {}\n",
        r.stabilized, r.final_dim, r.approximate
    ));
    Ok(Outcome::pass(text))
}

fn geodesic(a: &GeodesicArgs, format: Format) -> Result<Outcome> {
    require_report(format, &[Format::Csv, Format::SvgPlot])?;
    let (_, conn) = load_conn(&a.conn.conn)?;
    let trace = integrate_geodesic(&conn, pair(&a.p0)?, pair(&a.v0)?, a.smax, a.tol)?;
    match format {
        Format::Csv => return Ok(Outcome::pass(trace.to_csv())),
        Format::SvgPlot => return Ok(Outcome::pass(trace.to_svg())),
        _ => {}
    }
    let last = trace.last();
    let status = match trace.status {
        TraceStatus::Completed => "completed".to_string(),
        TraceStatus::Blowup(s) => format!("blowup at s={s}"),
        TraceStatus::LeftDomain(s) => format!("left-domain at s={s}"),
    };
    let mut text = format!(
        "status: {status}\nsamples: {}\nfinal: s={} x={} y={} vx={} vy={}\n",
        trace.samples.len(),
        last.s,
        last.x,
        last.y,
        last.vx,
        last.vy
    );
    if let Some((gamma, _)) = type_iii_params(&conn) {
        match conic_invariant_check(&conn, &trace) {
            Ok(c) => {
                text.push_str(&format!(
                    "u0: {}\nmax_abs_dev: {:e}\nmax_residual: {:e}\n",
                    c.u0, c.max_abs_dev, c.max_residual
                ));
                match c.blowup_predicted {
                    Some(b) => text.push_str(&format!("blowup_predicted: {b}\n")),
                    None => text.push_str("blowup_predicted: none\n"),
                }
            }
            Err(e) => text.push_str(&format!("conic check: {e}\n")),
        }
        if to_f64(&gamma) == 0.0 {
            match affine_curvature_estimate(&trace) {
                Ok(k) => text.push_str(&format!("affine_curvature: {k}\n")),
                Err(e) => text.push_str(&format!("affine_curvature: {e}\n")),
            }
        }
    }
    Ok(Outcome::pass(text))
}

fn equiv(a: &EquivArgs) -> Result<Outcome> {
    let doc = load_doc(&a.conn.conn)?;
    let p = doc
        .params()
        .ok_or_else(|| anyhow!("equiv needs a normal-form document"))?
        .clone();
    let (canon, mu) = canonicalize(&p)?;
    let mut text = format!("input: {}\ncanonical: {}\nmu: {mu}\n", p.label(), canon.label());
    if let Some(m) = &a.mu {
        let scaled = scale_params(&p, &rational(m)?)?;
        text.push_str(&format!("scaled: {}\n", scaled.label()));
    }
    let mut ok = true;
    if let Some(other) = &a.other {
        let q: ParamClass = load_doc(other)?
            .params()
            .ok_or_else(|| anyhow!("--other must be a normal-form document"))?
            .clone();
        ok = equivalent_params(&p, &q)?;
        text.push_str(&format!("other: {}\nequivalent: {ok}\n", q.label()));
    }
    Ok(Outcome { text, ok })
}

fn affine_markings(path: &Path) -> Result<Outcome> {
    let l = parse_sextuple_document(&read(path)?)?;
    let r = find_markings(&l)?;
    let mut text = format!("sextuple: {l}\n");
    for m in &r.markings {
        text.push_str(&format!(
            "lambda={} alpha={} delta={} type={}\n",
            m.lambda, m.alpha_m, m.delta_m, m.kind
        ));
    }
    text.push_str(&format!("special: {}\n", r.special_count()));
    Ok(Outcome::pass(text))
}

fn affine_solve(k1: Kind, n1: &str, k2: Kind, n2: &str, format: Format) -> Result<Outcome> {
    require_report(format, &[Format::Json])?;
    let l = solve_two_markings(k1.into(), &rational(n1)?, k2.into(), &rational(n2)?)?;
    if format == Format::Json {
        return Ok(Outcome::pass(to_pretty(&sextuple_to_json(&l))));
    }
    let (a0, d0) = l.marking_invariants(&Rational::from_integer(0.into()));
    let (a1, d1) = l.marking_invariants(&Rational::from_integer((-1).into()));
    let mut text = format!("sextuple: {l}\n");
    match third_marking_invariants(&a0, &a1, &d0, &d1) {
        Ok((a, d)) => text.push_str(&format!("third marking: alpha={} delta={}\n", fmt_rat(&a), fmt_rat(&d))),
        Err(e) => text.push_str(&format!("third marking: {e}\n")),
    }
    Ok(Outcome::pass(text))
}

fn glue_verify(n1: i64, n2: i64, window: u32, format: Format) -> Result<Outcome> {
    require_report(format, &[Format::Json])?;
    let atlas = build_model_atlas(n1, n2, window)?;
    let check = verify_atlas(&atlas);
    let text = if format == Format::Json {
        to_pretty(&atlas_report_to_json(&atlas, &check))
    } else {
        atlas_report(&atlas, &check)
    };
    Ok(Outcome { text, ok: check.is_valid() })
}

fn example_verify() -> Result<Outcome> {
    let conn = make_example_torus();
    let mut text = String::new();
    let mut ok = true;
    for r in example_stated_relations(&conn) {
        ok &= r.holds;
        text.push_str(&format!("{}: {}\n", r.name, r.holds));
    }
    text.push_str(&format!(
        "nabla_A A = 1/2 A + 3/4 (h^2+2h) Z: {}\n",
        example_self_derivative_holds(&conn)
    ));
    let inv = conn.is_isometry(&builtin_map(BuiltinMap::ExampleSigma)?)?;
    ok &= inv;
    text.push_str(&format!("preserved by (-x, -y - 2x^-2): {inv}\n"));
    let axis = curvature_locus_is_axis(&conn);
    ok &= axis;
    text.push_str(&format!("curvature vanishes on x=0: {axis}\n"));
    let gens = generators(&ParamClass::example())?;
    let killing = gens.killing.iter().all(|v| killing_residuals(&conn, v).is_zero());
    ok &= killing;
    text.push_str(&format!("A and d/dy are Killing: {killing}\n"));
    text.push_str(&format!("all stated checks: {ok}\n"));
    Ok(Outcome { text, ok })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let f = cli.format;
    match &cli.command {
        Command::Conn(ConnCmd::Show(c)) => {
            require_report(f, &[])?;
            conn_show(&c.conn)
        }
        Command::Conn(ConnCmd::Curvature { conn, locus_check }) => {
            require_report(f, &[])?;
            conn_curvature(&conn.conn, *locus_check)
        }
        Command::Killing(KillingCmd::Verify { conn, field }) => {
            require_report(f, &[])?;
            killing_verify(&conn.conn, field.as_deref())
        }
        Command::Killing(KillingCmd::Dim { conn, at, max_order }) => {
            killing_dim(&conn.conn, at, *max_order, f)
        }
        Command::Geodesic(a) => geodesic(a, f),
        Command::Equiv(a) => {
            require_report(f, &[])?;
            equiv(a)
        }
        Command::Affine(AffineCmd::Markings { sextuple }) => {
            require_report(f, &[])?;
            affine_markings(sextuple)
        }
        Command::Affine(AffineCmd::Solve { kind1, n1, kind2, n2 }) => {
            affine_solve(*kind1, n1, *kind2, n2, f)
        }
        Command::Glue(GlueCmd::Verify { n1, n2, window }) => glue_verify(*n1, *n2, *window, f),
        Command::Example(ExampleCmd::Verify) => {
            require_report(f, &[])?;
            example_verify()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(p) => fs::write(p, &outcome.text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
