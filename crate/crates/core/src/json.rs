//! JSON encoding of rings, elements, polynomials, cocycles, matrices and points.
//!
//! Encoders always emit the canonical object forms. Decoders also accept the
//! text forms from [`crate::parse`] wherever a polynomial, element or ring is expected.

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::cocycle::{var_names, CocycleData};
use crate::error::{Error, Result};
use crate::matrix::{PolyMatrix, RingMatrix};
use crate::parse::{parse_elem, parse_poly, parse_ring};
use crate::poly::LaurentPoly;
use crate::projspace::{multi_indices, normalize_point, ProjPoint};
use crate::ring::{Elem, Ring, RingFacts, RingSpec};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| bad(format!("missing field {name:?}")))
}

pub fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

pub fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

pub fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad(format!("{what} must be an integer")))
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().map_err(|_| bad(format!("{n} is not an integer"))),
        _ => Err(bad(format!("expected an integer, found {v}"))),
    }
}

// ---- rings -------------------------------------------------------------------------

fn spec_to_json(spec: &RingSpec, ring: &Ring) -> Value {
    match spec {
        RingSpec::Integers => json!({"kind": "int"}),
        RingSpec::Modular(n) => json!({"kind": "zmod", "n": n}),
        RingSpec::Quotient { base, var, modulus } => {
            let b = ring.base().expect("quotient base");
            json!({
                "kind": "quotient",
                "base": spec_to_json(base, b),
                "var": var,
                "modulus": modulus.iter().map(|c| elem_to_json(b, c)).collect::<Vec<_>>(),
            })
        }
    }
}

pub fn ring_to_json(ring: &Ring) -> Value {
    let mut v = spec_to_json(ring.spec(), ring);
    if let Some(f) = ring.facts() {
        v["facts"] = json!({
            "connected": f.is_connected,
            "nil": f.jacobson_hint.iter().map(|h| elem_to_json(ring, h)).collect::<Vec<_>>(),
        });
    }
    v
}

fn spec_from_json(v: &Value) -> Result<Ring> {
    if let Some(s) = v.as_str() {
        return parse_ring(s);
    }
    let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("ring kind must be a string"))?;
    let allowed: &[&str] = match kind {
        "int" => &["kind", "facts"],
        "zmod" => &["kind", "n", "facts"],
        "quotient" => &["kind", "base", "var", "modulus", "facts"],
        other => return Err(Error::MalformedSpec(format!("unknown ring kind {other:?}"))),
    };
    reject_unknown(v, allowed)?;
    match kind {
        "int" => Ok(Ring::integers()),
        "zmod" => Ring::zmod(as_u64(field(v, "n")?, "n")?),
        _ => {
            let base = spec_from_json(field(v, "base")?)?;
            let var = field(v, "var")?.as_str().ok_or_else(|| bad("var must be a string"))?.to_string();
            let modulus = as_array(field(v, "modulus")?, "modulus")?
                .iter()
                .map(|c| elem_from_json(&base, c))
                .collect::<Result<Vec<_>>>()?;
            Ring::new(RingSpec::Quotient { base: Box::new(base.spec().clone()), var, modulus })
        }
    }
}

pub fn ring_from_json(v: &Value) -> Result<Ring> {
    let ring = spec_from_json(v)?;
    let Some(f) = v.get("facts") else { return Ok(ring) };
    reject_unknown(f, &["connected", "nil"])?;
    let is_connected = field(f, "connected")?.as_bool().ok_or_else(|| bad("connected must be a boolean"))?;
    let jacobson_hint = match f.get("nil") {
        None => Vec::new(),
        Some(n) => as_array(n, "nil")?.iter().map(|h| elem_from_json(&ring, h)).collect::<Result<_>>()?,
    };
    Ring::with_facts(ring.spec().clone(), RingFacts { is_connected, jacobson_hint })
}

pub fn reject_unknown(v: &Value, allowed: &[&str]) -> Result<()> {
    let obj = v.as_object().ok_or_else(|| bad(format!("expected an object, found {v}")))?;
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(bad(format!("unknown field {k:?}"))),
        None => Ok(()),
    }
}

// ---- elements ----------------------------------------------------------------------

pub fn elem_to_json(ring: &Ring, e: &Elem) -> Value {
    match e {
        Elem::Int(n) => bigint_to_json(n),
        Elem::Mod(k) => json!(k),
        Elem::Poly(cs) => {
            let base = ring.base().expect("polynomial payload over a quotient ring");
            Value::Array(cs.iter().map(|c| elem_to_json(base, c)).collect())
        }
    }
}

pub fn elem_from_json(ring: &Ring, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(_) => Ok(ring.from_bigint(&bigint_from_json(v)?)),
        Value::String(s) => parse_elem(ring, s),
        Value::Array(cs) => {
            let base = ring.base().ok_or_else(|| bad(format!("coefficient lists need a quotient ring, not {}", ring.describe())))?;
            let cs = cs.iter().map(|c| elem_from_json(base, c)).collect::<Result<Vec<_>>>()?;
            ring.from_coeffs(&cs)
        }
        _ => Err(bad(format!("cannot read a ring element from {v}"))),
    }
}

pub fn elems_to_json(ring: &Ring, es: &[Elem]) -> Value {
    Value::Array(es.iter().map(|e| elem_to_json(ring, e)).collect())
}

pub fn elems_from_json(ring: &Ring, v: &Value) -> Result<Vec<Elem>> {
    as_array(v, "element list")?.iter().map(|e| elem_from_json(ring, e)).collect()
}

// ---- polynomials -------------------------------------------------------------------

/// `{"vars", "terms"}` without the ring, for use inside containers that carry it.
pub fn poly_terms_json(p: &LaurentPoly) -> Value {
    let terms: Vec<Value> = p.terms().map(|(e, c)| json!({"exp": e, "coef": elem_to_json(p.ring(), c)})).collect();
    json!({"vars": p.vars(), "terms": terms})
}

pub fn poly_to_json(p: &LaurentPoly) -> Value {
    let mut v = Map::new();
    v.insert("ring".into(), ring_to_json(p.ring()));
    if let Value::Object(rest) = poly_terms_json(p) {
        v.extend(rest);
    }
    Value::Object(v)
}

/// Reads a polynomial. `ring` is the ambient ring of the payload if any; `vars`
/// fixes the variables (required to match an explicit `"vars"` field).
pub fn poly_from_json(v: &Value, ring: Option<&Ring>, vars: Option<&[String]>) -> Result<LaurentPoly> {
    if let Value::String(s) = v {
        let ring = ring.ok_or_else(|| bad("a text polynomial needs a ring"))?;
        return parse_poly(ring, s, vars);
    }
    reject_unknown(v, &["ring", "vars", "terms"])?;
    let own = v.get("ring").map(ring_from_json).transpose()?;
    let ring = match (own, ring) {
        (Some(a), Some(b)) if a != *b => {
            return Err(Error::RingMismatch(format!("{} vs {}", a.describe(), b.describe())));
        }
        (Some(a), _) => a,
        (None, Some(b)) => b.clone(),
        (None, None) => return Err(bad("polynomial without a ring")),
    };
    let own_vars: Option<Vec<String>> = v
        .get("vars")
        .map(|vs| {
            as_array(vs, "vars")?
                .iter()
                .map(|s| s.as_str().map(String::from).ok_or_else(|| bad("variable names must be strings")))
                .collect()
        })
        .transpose()?;
    let vars: Vec<String> = match (own_vars, vars) {
        (Some(a), Some(b)) if a != b => return Err(bad(format!("expected variables {b:?}, found {a:?}"))),
        (Some(a), _) => a,
        (None, Some(b)) => b.to_vec(),
        (None, None) => vec!["X".into()],
    };
    let mut terms = Vec::new();
    for t in as_array(field(v, "terms")?, "terms")? {
        reject_unknown(t, &["exp", "coef"])?;
        let e = field(t, "exp")?;
        let exp: Vec<i64> = match e {
            Value::Array(xs) => xs.iter().map(|x| as_i64(x, "exponent")).collect::<Result<_>>()?,
            _ => vec![as_i64(e, "exponent")?],
        };
        if exp.len() != vars.len() {
            return Err(bad(format!("exponent {exp:?} does not match variables {vars:?}")));
        }
        terms.push((exp, elem_from_json(&ring, field(t, "coef")?)?));
    }
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let zero = LaurentPoly::zero(&ring, &refs);
    Ok(terms.into_iter().fold(zero.clone(), |acc, (e, c)| &acc + &zero.monomial_like(e, c)))
}

pub fn polys_from_json(v: &Value, ring: Option<&Ring>, vars: Option<&[String]>) -> Result<Vec<LaurentPoly>> {
    as_array(v, "polynomial list")?.iter().map(|p| poly_from_json(p, ring, vars)).collect()
}

pub fn polys_terms_json(ps: &[LaurentPoly]) -> Value {
    Value::Array(ps.iter().map(poly_terms_json).collect())
}

// ---- cocycles ----------------------------------------------------------------------

pub fn cocycle_to_json(c: &CocycleData) -> Value {
    let entries: Vec<Value> = c
        .entries()
        .filter(|((i, j), _)| i < j)
        .map(|(&(i, j), t)| json!({"i": i, "j": j, "t": poly_terms_json(t)}))
        .collect();
    json!({"n": c.n(), "ring": ring_to_json(c.ring()), "entries": entries})
}

pub fn cocycle_from_json(v: &Value, ring: Option<&Ring>) -> Result<CocycleData> {
    reject_unknown(v, &["n", "ring", "entries"])?;
    let n = as_u64(field(v, "n")?, "n")? as usize;
    let ring = match v.get("ring") {
        Some(r) => ring_from_json(r)?,
        None => ring.cloned().ok_or_else(|| bad("cocycle without a ring"))?,
    };
    let vars = var_names(n);
    let mut entries = Vec::new();
    for e in as_array(field(v, "entries")?, "entries")? {
        reject_unknown(e, &["i", "j", "t"])?;
        let i = as_u64(field(e, "i")?, "i")? as usize;
        let j = as_u64(field(e, "j")?, "j")? as usize;
        entries.push(((i, j), poly_from_json(field(e, "t")?, Some(&ring), Some(&vars))?));
    }
    CocycleData::new(n, &ring, entries)
}

// ---- matrices ----------------------------------------------------------------------

pub fn matrix_to_json(m: &RingMatrix) -> Value {
    let ring = m.ring();
    let entries: Vec<Value> = m.elems().iter().map(|r| elems_to_json(ring, r)).collect();
    json!({"ring": ring_to_json(ring), "rows": m.rows(), "cols": m.cols(), "entries": entries})
}

fn rows_of(v: &Value) -> Result<&Vec<Value>> {
    let rows = as_array(field(v, "entries")?, "entries")?;
    if let Some(r) = v.get("rows") {
        if as_u64(r, "rows")? as usize != rows.len() {
            return Err(bad("row count does not match entries"));
        }
    }
    if let Some(c) = v.get("cols") {
        let c = as_u64(c, "cols")? as usize;
        if rows.iter().any(|r| r.as_array().map(Vec::len) != Some(c)) {
            return Err(bad("column count does not match entries"));
        }
    }
    Ok(rows)
}

pub fn matrix_from_json(v: &Value, ring: Option<&Ring>) -> Result<RingMatrix> {
    let v = match v {
        Value::Array(_) => &json!({"entries": v}),
        _ => v,
    };
    reject_unknown(v, &["ring", "rows", "cols", "entries"])?;
    let ring = match v.get("ring") {
        Some(r) => ring_from_json(r)?,
        None => ring.cloned().ok_or_else(|| bad("matrix without a ring"))?,
    };
    let rows = rows_of(v)?.iter().map(|r| elems_from_json(&ring, r)).collect::<Result<Vec<_>>>()?;
    RingMatrix::from_elems(&ring, rows)
}

pub fn poly_matrix_to_json(m: &PolyMatrix) -> Value {
    let entries: Vec<Value> = m.to_rows().iter().map(|r| polys_terms_json(r)).collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

pub fn poly_matrix_from_json(v: &Value, ring: &Ring, vars: &[String]) -> Result<PolyMatrix> {
    let v = match v {
        Value::Array(_) => &json!({"entries": v}),
        _ => v,
    };
    reject_unknown(v, &["rows", "cols", "entries"])?;
    let rows = rows_of(v)?
        .iter()
        .map(|r| polys_from_json(r, Some(ring), Some(vars)))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    PolyMatrix::from_rows(rows, &LaurentPoly::zero(ring, &refs))
}

// ---- points ------------------------------------------------------------------------

pub fn point_to_json(p: &ProjPoint) -> Value {
    json!({"ring": ring_to_json(p.ring()), "coords": elems_to_json(p.ring(), p.coords())})
}

pub fn point_from_json(v: &Value, ring: Option<&Ring>) -> Result<ProjPoint> {
    let v = match v {
        Value::Array(_) => &json!({"coords": v}),
        _ => v,
    };
    reject_unknown(v, &["ring", "coords"])?;
    let ring = match v.get("ring") {
        Some(r) => ring_from_json(r)?,
        None => ring.cloned().ok_or_else(|| bad("point without a ring"))?,
    };
    normalize_point(&ring, &elems_from_json(&ring, field(v, "coords")?)?)
}

/// Veronese coordinates labelled by their multi-indices.
pub fn veronese_coords_json(n: usize, d: u32, z: &ProjPoint) -> Value {
    let ring = z.ring();
    Value::Array(
        multi_indices(n, d)
            .into_iter()
            .zip(z.coords())
            .map(|(i, c)| json!({"index": i, "value": elem_to_json(ring, c)}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_round_trip() {
        for r in [Ring::integers(), Ring::zmod(12).unwrap(), Ring::f4(), parse_ring("F4[s]/(s^2)").unwrap()] {
            assert_eq!(ring_from_json(&ring_to_json(&r)).unwrap(), r);
        }
        assert_eq!(ring_from_json(&json!("Z/4")).unwrap(), Ring::zmod(4).unwrap());
        assert!(ring_from_json(&json!({"kind": "zmod", "n": 4, "extra": 1})).is_err());
        let r = ring_from_json(&json!({"kind": "quotient", "base": "Z", "var": "x", "modulus": [5, 0, 1],
            "facts": {"connected": true}}))
        .unwrap();
        assert!(r.facts().unwrap().is_connected);
    }

    #[test]
    fn elements_and_polys() {
        let r = parse_ring("Z/4[t]/(t^2)").unwrap();
        let e = elem_from_json(&r, &json!("1+3t")).unwrap();
        assert_eq!(elem_to_json(&r, &e), json!([1, 3]));
        assert_eq!(elem_from_json(&r, &json!([1, 3])).unwrap(), e);
        let z = Ring::integers();
        let big = elem_from_json(&z, &serde_json::from_str("123456789012345678901234567890").unwrap()).unwrap();
        assert_eq!(elem_to_json(&z, &big).to_string(), "123456789012345678901234567890");

        let z4 = Ring::zmod(4).unwrap();
        let p = parse_poly(&z4, "2+3X+2X^-2", None).unwrap();
        let v = poly_to_json(&p);
        assert_eq!(v["terms"][0], json!({"exp": [-2], "coef": 2}));
        assert_eq!(poly_from_json(&v, None, None).unwrap(), p);
        assert_eq!(poly_from_json(&json!("2+3X+2X^-2"), Some(&z4), None).unwrap(), p);
        let scalar_exp = json!({"terms": [{"exp": 1, "coef": 1}]});
        assert_eq!(poly_from_json(&scalar_exp, Some(&z4), None).unwrap(), LaurentPoly::from_i64s(&z4, &[0, 1]));
        assert!(matches!(poly_from_json(&v, Some(&Ring::zmod(8).unwrap()), None), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn containers_round_trip() {
        let r = Ring::zmod(4).unwrap();
        let c = crate::picard::twisting_cocycle(2, 3, &r).unwrap();
        assert_eq!(cocycle_from_json(&cocycle_to_json(&c), None).unwrap(), c);
        let m = RingMatrix::from_i64(&r, &[&[1, 2], &[3, 0]]);
        assert_eq!(matrix_from_json(&matrix_to_json(&m), None).unwrap(), m);
        assert_eq!(matrix_from_json(&json!([[1, 2], [3, 0]]), Some(&r)).unwrap(), m);
        let p = point_from_json(&json!([2, 3]), Some(&r)).unwrap();
        assert_eq!(point_to_json(&p)["coords"], json!([2, 1]));
        assert_eq!(point_from_json(&point_to_json(&p), None).unwrap(), p);
        let v = crate::projspace::veronese_map(2, &point_from_json(&json!([1, 2]), Some(&r)).unwrap()).unwrap();
        assert_eq!(veronese_coords_json(1, 2, &v)[1], json!({"index": [1, 1], "value": 2}));
    }
}
