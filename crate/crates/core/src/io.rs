//! JSON documents for rationals, polynomials, maps, connections, sextuples
//! and reports. Rationals are `[numerator, denominator]` pairs.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::affine::LeftInvariantConnection;
use crate::algebra::{MonoTriMap, PuiseuxPoly, Rational, VectorField2};
use crate::catalog::{make_normal_form, Family, ParamClass};
use crate::connection::{Connection, Domain};
use crate::error::{Error, Result};
use crate::gluing::{Atlas, AtlasCheck};
use crate::killing::JetReport;

fn perr(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn big_to_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => json!(v),
        None => json!(b.to_string()),
    }
}

fn big_from_json(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| perr(path, format!("{n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| perr(path, format!("{s:?} is not an integer"))),
        other => Err(perr(path, format!("expected an integer, got {other}"))),
    }
}

pub fn rational_to_json(q: &Rational) -> Value {
    json!([big_to_json(q.numer()), big_to_json(q.denom())])
}

pub fn rational_from_json(v: &Value, path: &str) -> Result<Rational> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| perr(path, "expected [numerator, denominator]"))?;
    let n = big_from_json(&arr[0], &format!("{path}[0]"))?;
    let d = big_from_json(&arr[1], &format!("{path}[1]"))?;
    if d.is_zero() {
        return Err(perr(path, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Parses `"3"`, `"-3/4"` or a decimal such as `"0.25"`.
pub fn parse_rational_str(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("{s:?} is not a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{s:?} has a zero denominator")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').ok_or_else(bad)?;
    if fp.is_empty() && ip.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
    let q = Rational::new(digits, BigInt::from(10u8).pow(fp.len() as u32));
    Ok(if neg { -q } else { q })
}

pub fn poly_to_json(p: &PuiseuxPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(c, xe, ye)| json!({"c": rational_to_json(c), "xe": rational_to_json(xe), "ye": ye}))
            .collect(),
    )
}

pub fn poly_from_json(v: &Value, path: &str) -> Result<PuiseuxPoly> {
    let arr = v.as_array().ok_or_else(|| perr(path, "expected a list of terms"))?;
    let mut p = PuiseuxPoly::zero();
    for (i, t) in arr.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let obj = t.as_object().ok_or_else(|| perr(&tp, "expected {c, xe, ye}"))?;
        check_keys(obj, &["c", "xe", "ye"], &tp)?;
        let c = rational_from_json(field(obj, "c", &tp)?, &format!("{tp}.c"))?;
        let xe = match obj.get("xe") {
            Some(v) => rational_from_json(v, &format!("{tp}.xe"))?,
            None => Rational::zero(),
        };
        let ye = match obj.get("ye") {
            Some(v) => v
                .as_u64()
                .and_then(|y| u32::try_from(y).ok())
                .ok_or_else(|| perr(&format!("{tp}.ye"), "expected a nonnegative integer"))?,
            None => 0,
        };
        p.add_term(c, xe, ye);
    }
    Ok(p)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(path, format!("missing field {key:?}")))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(perr(path, format!("unknown field {k:?}")));
        }
    }
    Ok(())
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

pub fn map_to_json(m: &MonoTriMap) -> Value {
    json!({
        "c": rational_to_json(m.c()),
        "r": rational_to_json(m.r()),
        "a": rational_to_json(m.a()),
        "s": rational_to_json(m.s()),
        "g": poly_to_json(m.g()),
    })
}

pub fn map_from_json(v: &Value, path: &str) -> Result<MonoTriMap> {
    let obj = as_object(v, path)?;
    check_keys(obj, &["c", "r", "a", "s", "g"], path)?;
    let q = |k: &str| rational_from_json(field(obj, k, path)?, &format!("{path}.{k}"));
    let g = match obj.get("g") {
        Some(g) => poly_from_json(g, &format!("{path}.g"))?,
        None => PuiseuxPoly::zero(),
    };
    MonoTriMap::new(q("c")?, q("r")?, q("a")?, q("s")?, g)
}

pub fn field_to_json(f: &VectorField2) -> Value {
    json!({"x": poly_to_json(&f.cx), "y": poly_to_json(&f.cy)})
}

pub fn field_from_json(v: &Value, path: &str) -> Result<VectorField2> {
    let obj = as_object(v, path)?;
    check_keys(obj, &["kind", "x", "y"], path)?;
    let comp = |k: &str| match obj.get(k) {
        Some(p) => poly_from_json(p, &format!("{path}.{k}")),
        None => Ok(PuiseuxPoly::zero()),
    };
    Ok(VectorField2::new(comp("x")?, comp("y")?))
}

/// A field document is either one field `{"x": .., "y": ..}` or
/// `{"fields": [..]}`.
pub fn parse_field_document(text: &str) -> Result<Vec<VectorField2>> {
    let v = parse_json(text)?;
    if let Some(list) = v.get("fields") {
        let arr = list.as_array().ok_or_else(|| perr("fields", "expected a list"))?;
        return arr
            .iter()
            .enumerate()
            .map(|(i, f)| field_from_json(f, &format!("fields[{i}]")))
            .collect();
    }
    Ok(vec![field_from_json(&v, "$")?])
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m);
        Error::Parse(format!("line {}, column {}: {msg}", e.line(), e.column()))
    })
}

const CHRISTOFFEL_KEYS: [&str; 6] = ["G111", "G211", "G112", "G212", "G122", "G222"];

/// Parsed connection document.
#[derive(Clone, Debug, PartialEq)]
pub enum ConnectionDocument {
    Custom(Connection),
    NormalForm(ParamClass),
}

impl ConnectionDocument {
    pub fn connection(&self) -> Result<Connection> {
        match self {
            ConnectionDocument::Custom(c) => Ok(c.clone()),
            ConnectionDocument::NormalForm(p) => make_normal_form(p),
        }
    }

    pub fn params(&self) -> Option<&ParamClass> {
        match self {
            ConnectionDocument::NormalForm(p) => Some(p),
            ConnectionDocument::Custom(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ConnectionDocument::Custom(c) => connection_to_json(c),
            ConnectionDocument::NormalForm(p) => params_to_json(p),
        }
    }
}

pub fn parse_connection_document(text: &str) -> Result<ConnectionDocument> {
    connection_document_from_json(&parse_json(text)?)
}

pub fn connection_document_from_json(v: &Value) -> Result<ConnectionDocument> {
    let obj = as_object(v, "$")?;
    let kind = field(obj, "kind", "$")?
        .as_str()
        .ok_or_else(|| perr("kind", "expected a string"))?;
    match kind {
        "custom" => custom_from_json(obj).map(ConnectionDocument::Custom),
        "normal_form" => {
            let p = params_from_json(obj)?;
            p.validate()?;
            Ok(ConnectionDocument::NormalForm(p))
        }
        other => Err(perr("kind", format!("unknown kind {other:?}"))),
    }
}

fn custom_from_json(obj: &Map<String, Value>) -> Result<Connection> {
    check_keys(obj, &["kind", "christoffel", "domain"], "$")?;
    let chr = as_object(field(obj, "christoffel", "$")?, "christoffel")?;
    let mut sym: [PuiseuxPoly; 6] = Default::default();
    for k in chr.keys() {
        if !CHRISTOFFEL_KEYS.contains(&k.as_str()) {
            let msg = if matches!(k.as_str(), "G121" | "G221") {
                format!("{k:?}: torsion-free symbols are given once, use G112/G212")
            } else {
                format!("unknown symbol {k:?}")
            };
            return Err(perr("christoffel", msg));
        }
    }
    for (slot, key) in CHRISTOFFEL_KEYS.iter().enumerate() {
        if let Some(v) = chr.get(*key) {
            sym[slot] = poly_from_json(v, &format!("christoffel.{key}"))?;
        }
    }
    match obj.get("domain") {
        None => Ok(Connection::from_symbols(sym)),
        Some(d) => {
            let domain = match d.as_str() {
                Some("whole-plane") => Domain::WholePlane,
                Some("right-half-plane") => Domain::RightHalfPlane,
                _ => {
                    return Err(perr(
                        "domain",
                        "expected \"whole-plane\" or \"right-half-plane\"",
                    ))
                }
            };
            Connection::with_domain(sym, domain)
        }
    }
}

pub fn connection_to_json(c: &Connection) -> Value {
    let mut chr = Map::new();
    for (key, p) in CHRISTOFFEL_KEYS.iter().zip(c.symbols()) {
        chr.insert((*key).to_string(), poly_to_json(p));
    }
    json!({"kind": "custom", "christoffel": chr, "domain": c.domain().as_str()})
}

fn params_from_json(obj: &Map<String, Value>) -> Result<ParamClass> {
    check_keys(obj, &["kind", "family", "n", "params"], "$")?;
    let fam_s = field(obj, "family", "$")?
        .as_str()
        .ok_or_else(|| perr("family", "expected a string"))?;
    let family =
        Family::parse(fam_s).ok_or_else(|| perr("family", format!("unknown family {fam_s:?}")))?;
    let n = obj.get("n").map(|v| rational_from_json(v, "n")).transpose()?;
    let empty = Map::new();
    let params = match obj.get("params") {
        Some(v) => as_object(v, "params")?,
        None => &empty,
    };
    check_keys(params, &["gamma", "phi", "epsilon"], "params")?;
    let get = |k: &str| -> Result<Rational> {
        match params.get(k) {
            Some(v) => rational_from_json(v, &format!("params.{k}")),
            None => Ok(Rational::zero()),
        }
    };
    let (gamma, phi, epsilon) = (get("gamma")?, get("phi")?, get("epsilon")?);
    let need_n = || n.clone().ok_or_else(|| perr("n", format!("Type {fam_s} requires n")));
    Ok(match family {
        Family::I => ParamClass::type_i(need_n()?, gamma, phi, epsilon),
        Family::II0 => ParamClass::type_ii0(need_n()?, gamma, phi, epsilon),
        Family::II1 => ParamClass::type_ii1(need_n()?, gamma, phi, epsilon),
        Family::III => {
            let mut p = ParamClass::type_iii(gamma, epsilon);
            p.n = n;
            p.phi = phi;
            p
        }
        Family::Flat => ParamClass::flat(),
        Family::Example => ParamClass::example(),
    })
}

pub fn params_to_json(p: &ParamClass) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!("normal_form"));
    obj.insert("family".into(), json!(p.family.name()));
    if let Some(n) = &p.n {
        if !matches!(p.family, Family::Example) {
            obj.insert("n".into(), rational_to_json(n));
        }
    }
    let mut params = Map::new();
    match p.family {
        Family::Flat | Family::Example => {}
        Family::III => {
            params.insert("gamma".into(), rational_to_json(&p.gamma));
            params.insert("epsilon".into(), rational_to_json(&p.epsilon));
        }
        _ => {
            params.insert("gamma".into(), rational_to_json(&p.gamma));
            params.insert("phi".into(), rational_to_json(&p.phi));
            params.insert("epsilon".into(), rational_to_json(&p.epsilon));
        }
    }
    if !params.is_empty() {
        obj.insert("params".into(), Value::Object(params));
    }
    Value::Object(obj)
}

const SEXTUPLE_KEYS: [&str; 6] = ["alpha", "beta", "gamma", "delta", "epsilon", "phi"];

pub fn parse_sextuple_document(text: &str) -> Result<LeftInvariantConnection> {
    sextuple_from_json(&parse_json(text)?)
}

pub fn sextuple_from_json(v: &Value) -> Result<LeftInvariantConnection> {
    let obj = as_object(v, "$")?;
    check_keys(obj, &SEXTUPLE_KEYS, "$")?;
    let mut vals: [Rational; 6] = Default::default();
    for (slot, k) in vals.iter_mut().zip(SEXTUPLE_KEYS) {
        *slot = rational_from_json(field(obj, k, "$")?, k)?;
    }
    Ok(LeftInvariantConnection::new(vals))
}

pub fn sextuple_to_json(l: &LeftInvariantConnection) -> Value {
    let mut obj = Map::new();
    for (k, q) in SEXTUPLE_KEYS.iter().zip(l.to_array()) {
        obj.insert((*k).to_string(), rational_to_json(&q));
    }
    Value::Object(obj)
}

pub fn jet_report_to_json(r: &JetReport) -> Value {
    json!({
        "point": [rational_to_json(&r.point.0), rational_to_json(&r.point.1)],
        "dims": r.dims.iter().map(|(o, d)| json!({"order": o, "dim": d})).collect::<Vec<_>>(),
        "stabilized": r.stabilized,
        "final_dim": r.final_dim,
        "approximate": r.approximate,
    })
}

pub fn atlas_report_to_json(atlas: &Atlas, check: &AtlasCheck) -> Value {
    json!({
        "n1": atlas.n1,
        "n2": atlas.n2,
        "sextuple": sextuple_to_json(&atlas.sextuple),
        "charts": atlas.charts.iter().map(|c| json!({
            "index": c.index,
            "orientation": c.orientation,
            "normal_form": params_to_json(&c.params),
        })).collect::<Vec<_>>(),
        "transitions": check.transitions.iter().zip(&atlas.transitions).map(|(t, tr)| json!({
            "from": t.from,
            "to": t.to,
            "map": t.label,
            "coefficients": map_to_json(&tr.map),
            "isometry": t.isometry,
        })).collect::<Vec<_>>(),
        "connected": check.connected,
        "verified": check.is_valid(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::mono;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn rationals() {
        let v = rational_to_json(&rat(-3, 4));
        assert_eq!(v, json!([-3, 4]));
        assert_eq!(rational_from_json(&v, "q").unwrap(), rat(-3, 4));
        assert_eq!(rational_from_json(&json!([2, -4]), "q").unwrap(), rat(-1, 2));
        assert!(matches!(rational_from_json(&json!([1, 0]), "q"), Err(Error::Parse(_))));
        assert!(matches!(rational_from_json(&json!([1.5, 2]), "q"), Err(Error::Parse(_))));
        let big = Rational::from_integer(BigInt::from(10).pow(30));
        assert_eq!(rational_from_json(&rational_to_json(&big), "q").unwrap(), big);
        assert_eq!(parse_rational_str("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational_str("2").unwrap(), int(2));
        assert_eq!(parse_rational_str("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational_str("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational_str("1/0").is_err());
        assert!(parse_rational_str("abc").is_err());
    }

    #[test]
    fn poly_and_map_round_trip() {
        let p = &mono(1, 2, -1, 2, 1) + &mono(-3, 4, 2, 1, 0);
        assert_eq!(poly_from_json(&poly_to_json(&p), "p").unwrap(), p);
        let m = MonoTriMap::new(int(-1), int(1), int(-1), int(0), mono(-2, 1, -2, 1, 0)).unwrap();
        assert_eq!(map_from_json(&map_to_json(&m), "m").unwrap(), m);
        let err = poly_from_json(&json!([{"c": [1, 0]}]), "p").unwrap_err();
        assert_eq!(err, Error::Parse("p[0].c: zero denominator".into()));
    }

    #[test]
    fn normal_form_documents() {
        let d = parse_connection_document(
            r#"{"kind":"normal_form","family":"III","params":{"gamma":[1,1],"epsilon":[0,1]}}"#,
        )
        .unwrap();
        assert_eq!(d.params().unwrap(), &ParamClass::type_iii(int(1), int(0)));
        let e = parse_connection_document(
            r#"{"kind":"normal_form","family":"I","n":[1,2],"params":{"gamma":[1,1],"phi":[0,1],"epsilon":[1,1]}}"#,
        );
        assert!(matches!(e, Err(Error::InvalidParams(_))));
        let p = ParamClass::type_i(int(2), rat(3, 4), rat(-3, 4), rat(-3, 4));
        let doc = ConnectionDocument::NormalForm(p.clone());
        let back = connection_document_from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        for q in [ParamClass::flat(), ParamClass::example(), ParamClass::type_iii(int(0), int(-2))] {
            let d = ConnectionDocument::NormalForm(q);
            assert_eq!(connection_document_from_json(&d.to_json()).unwrap(), d);
        }
    }

    #[test]
    fn custom_documents() {
        let conn = make_normal_form(&ParamClass::type_ii1(int(3), int(1), int(0), int(2))).unwrap();
        let doc = connection_to_json(&conn);
        let back = connection_document_from_json(&doc).unwrap().connection().unwrap();
        assert!(back.same_symbols(&conn));
        let bad = r#"{"kind":"custom","christoffel":{"G121":[]}}"#;
        assert!(matches!(parse_connection_document(bad), Err(Error::Parse(_))));
        let half = r#"{"kind":"custom","christoffel":{"G222":[{"c":[1,1],"xe":[1,2],"ye":0}]},"domain":"whole-plane"}"#;
        assert!(matches!(parse_connection_document(half), Err(Error::InvalidParams(_))));
        let e = parse_connection_document("{\n  \"kind\": ").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }

    #[test]
    fn sextuples_and_fields() {
        let l = LeftInvariantConnection::new([rat(-1, 2), int(0), rat(3, 4), int(1), rat(-3, 4), rat(-3, 4)]);
        assert_eq!(sextuple_from_json(&sextuple_to_json(&l)).unwrap(), l);
        let fields = parse_field_document(
            r#"{"fields":[{"x":[{"c":[1,2],"xe":[1,1],"ye":0}],"y":[{"c":[-1,1],"xe":[0,1],"ye":1}]},{"y":[{"c":[1,1]}]}]}"#,
        )
        .unwrap();
        assert_eq!(fields.len(), 2);
        assert_eq!(fields[1], VectorField2::dy());
        assert_eq!(field_from_json(&field_to_json(&fields[0]), "f").unwrap(), fields[0]);
    }
}
