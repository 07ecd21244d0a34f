//! Command dispatch for the `projic` binary: JSON job envelopes in, JSON results out.

use std::path::PathBuf;

use clap::Parser;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cocycle::{check_cocycle, normalize_cocycle, CocycleData};
use crate::error::{Error, ErrorClass, Result};
use crate::horrocks::{check_witness, principal_generator};
use crate::json::*;
use crate::oracle;
use crate::parse::infer_vars;
use crate::picard::{classify_line_bundle, twisting_cocycle, LineBundle};
use crate::poly::{
    homogeneous_components, is_homogeneous_of_degree, is_nilpotent_poly, is_unit_poly, laurent_unit_decompose,
    monic_divide, LaurentPoly,
};
use crate::projmod::{
    conjugate_idempotent, ideal_norm_principality, rank_one_split, unconjugate_idempotent, verify_nonfree,
    verify_split, FreenessResult, NonFreeCertificate, NormSearch,
};
use crate::projspace::{
    affine_chart_system, apply_homogeneous_map, find_nonvanishing_certificate, multi_indices, normalize_point,
    pgl_act, veronese_inverse, veronese_map, NonvanishingCertificate,
};
use crate::ring::{Elem, Ring};

pub const COMMANDS: &[&str] = &[
    "ring-info",
    "poly-unit",
    "poly-nilpotent",
    "laurent-decompose",
    "monic-divide",
    "homog-components",
    "horrocks",
    "cocycle-check",
    "cocycle-normalize",
    "pic-twist",
    "pic-classify",
    "veronese",
    "veronese-inv",
    "affine-chart",
    "apply-map",
    "pgl-act",
    "idempotent-conjugate",
    "rank-one-split",
    "ideal-principal",
    "oracle",
];

pub const ORACLE_TASKS: &[&str] = &["points", "units", "locality", "inverse", "gl-criterion"];

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub verify: bool,
    pub seed: u64,
    pub cap: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { verify: false, seed: 0, cap: oracle::DEFAULT_CAP }
    }
}

impl Options {
    /// Defaults with the cap taken from `PROJIC_CAP` when set.
    pub fn from_env() -> Result<Options> {
        let mut o = Options::default();
        if let Ok(s) = std::env::var("PROJIC_CAP") {
            o.cap = s.trim().parse().map_err(|_| Error::InvalidInput(format!("PROJIC_CAP={s:?} is not a count")))?;
        }
        Ok(o)
    }

    fn to_json(self) -> Value {
        json!({"verify": self.verify, "seed": self.seed, "cap": self.cap})
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvelopeOptions {
    verify: Option<bool>,
    seed: Option<u64>,
    cap: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobEnvelope {
    v: u32,
    command: String,
    payload: Value,
    #[serde(default)]
    options: Option<EnvelopeOptions>,
}

/// A failed command; `certificate` carries replayable evidence for `NonFree`.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub error: Error,
    pub certificate: Option<Value>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, certificate: None }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::InvalidInput => EXIT_INVALID,
        ErrorClass::MathFailure => EXIT_MATH,
        ErrorClass::CapExceeded => EXIT_CAP,
    }
}

fn failure_json(f: &Failure) -> Value {
    let mut e = json!({"code": f.error.code(), "detail": f.error.to_string()});
    if let Some(c) = &f.certificate {
        e["certificate"] = c.clone();
    }
    e
}

fn replay_failed(what: &str) -> Error {
    Error::CertificateInvalid(format!("{what} did not replay"))
}

// ---- payload helpers -------------------------------------------------------------

fn ring_field(p: &Value) -> Result<Ring> {
    ring_from_json(field(p, "ring")?)
}

fn ring_opt(p: &Value) -> Result<Option<Ring>> {
    p.get("ring").map(ring_from_json).transpose()
}

fn collect_vars(v: &Value, ring: &Ring, out: &mut Vec<String>, explicit: &mut Option<Vec<String>>) -> Result<()> {
    match v {
        Value::String(s) => out.extend(infer_vars(ring, s)?),
        Value::Array(xs) => {
            for x in xs {
                collect_vars(x, ring, out, explicit)?;
            }
        }
        Value::Object(o) => {
            if let (Some(vs), None) = (o.get("vars"), explicit.as_ref()) {
                let names = as_array(vs, "vars")?
                    .iter()
                    .map(|s| s.as_str().map(String::from).ok_or_else(|| Error::InvalidInput("bad variable name".into())))
                    .collect::<Result<Vec<_>>>()?;
                *explicit = Some(names);
            }
        }
        _ => {}
    }
    Ok(())
}

/// Variables shared by the polynomials under `keys`: the payload's `"vars"`,
/// else those of the first term-map polynomial, else every name used in text, else `X`.
fn shared_vars(p: &Value, ring: &Ring, keys: &[&str]) -> Result<Vec<String>> {
    if let Some(vs) = p.get("vars") {
        return as_array(vs, "vars")?
            .iter()
            .map(|s| s.as_str().map(String::from).ok_or_else(|| Error::InvalidInput("bad variable name".into())))
            .collect();
    }
    let mut names = Vec::new();
    let mut explicit = None;
    for k in keys {
        if let Some(v) = p.get(*k) {
            collect_vars(v, ring, &mut names, &mut explicit)?;
        }
    }
    if let Some(e) = explicit {
        return Ok(e);
    }
    let joined = names.join("+");
    let mut vars = infer_vars(ring, &joined)?;
    if vars.is_empty() {
        vars.push("X".into());
    }
    Ok(vars)
}

fn poly_field(p: &Value, key: &str, ring: &Ring, vars: &[String]) -> Result<LaurentPoly> {
    poly_from_json(field(p, key)?, Some(ring), Some(vars))
}

fn polys_field(p: &Value, key: &str, ring: &Ring, vars: &[String]) -> Result<Vec<LaurentPoly>> {
    polys_from_json(field(p, key)?, Some(ring), Some(vars))
}

fn single_poly(p: &Value, key: &str) -> Result<(Ring, LaurentPoly)> {
    let ring = ring_field(p)?;
    let vars = shared_vars(p, &ring, &[key])?;
    let poly = poly_field(p, key, &ring, &vars)?;
    Ok((ring, poly))
}

fn cocycle_payload(p: &Value) -> Result<CocycleData> {
    if p.get("entries").is_some() {
        return cocycle_from_json(p, None);
    }
    let ring = ring_opt(p)?;
    let c = p.get("cocycle").or_else(|| p.get("bundle")).ok_or_else(|| Error::InvalidInput("missing cocycle".into()))?;
    cocycle_from_json(c, ring.as_ref())
}

fn u32_field(p: &Value, key: &str) -> Result<u32> {
    u32::try_from(as_u64(field(p, key)?, key)?).map_err(|_| Error::InvalidInput(format!("{key} too large")))
}

fn norm_search_json(s: &NormSearch) -> Value {
    json!({
        "ideal_norm": bigint_to_json(&s.ideal_norm),
        "d": bigint_to_json(&s.d),
        "u_bound": bigint_to_json(&s.u_bound),
        "v_bound": bigint_to_json(&s.v_bound),
    })
}

fn nonfree_json(c: &NonFreeCertificate) -> Value {
    match c {
        NonFreeCertificate::Norm { row, search } => json!({"kind": "norm", "row": row, "search": norm_search_json(search)}),
        NonFreeCertificate::Exhaustion { searched } => json!({"kind": "exhaustion", "searched": searched.to_string()}),
    }
}

fn report_json(r: &oracle::EnumerationReport) -> Value {
    let ring = &r.ring;
    json!({
        "ring": ring_to_json(ring),
        "task": r.task,
        "count": r.count,
        "witnesses": r.witnesses.iter().map(|w| elems_to_json(ring, w)).collect::<Vec<_>>(),
    })
}

// ---- commands --------------------------------------------------------------------

fn ring_info(p: &Value, o: &Options) -> Result<Value> {
    let ring = ring_field(p)?;
    let size = ring.size();
    let enumerable = size.is_some_and(|s| s <= o.cap as u128);
    let units = if enumerable { Some(oracle::units_report(&ring, o.cap)?.count) } else { None };
    let prims = if enumerable { Some(elems_to_json(&ring, &ring.primitive_idempotents()?)) } else { None };
    Ok(json!({
        "ring": ring_to_json(&ring),
        "description": ring.describe(),
        "finite": ring.is_finite(),
        "size": size.map(|s| s.to_string()),
        "connected": ring.is_connected().ok(),
        "local": ring.is_local().ok(),
        "nil_bound": ring.nil_bound(),
        "units": units,
        "primitive_idempotents": prims,
    }))
}

fn poly_unit(p: &Value, o: &Options) -> Result<Value> {
    let (_, f) = single_poly(p, "p")?;
    let inv = is_unit_poly(&f)?;
    if o.verify {
        if let Some(q) = &inv {
            if !(&f * q).is_one() {
                return Err(replay_failed("p * inverse = 1"));
            }
        }
    }
    Ok(json!({"unit": inv.is_some(), "inverse": inv.as_ref().map(poly_terms_json)}))
}

fn poly_nilpotent(p: &Value, o: &Options) -> Result<Value> {
    let (_, f) = single_poly(p, "p")?;
    let k = is_nilpotent_poly(&f)?;
    if o.verify {
        if let Some(k) = k {
            if !f.pow(k).is_zero() || (k > 1 && f.pow(k - 1).is_zero()) {
                return Err(replay_failed("nilpotency order"));
            }
        }
    }
    Ok(json!({"nilpotent": k.is_some(), "order": k}))
}

fn laurent_decompose(p: &Value, o: &Options) -> Result<Value> {
    let (ring, f) = single_poly(p, "p")?;
    let dec = laurent_unit_decompose(&f)?;
    if o.verify && !dec.verify(&f) {
        return Err(replay_failed("u X^l (1+a)(1+b) = p"));
    }
    Ok(json!({
        "l": dec.shift,
        "u": elem_to_json(&ring, &dec.unit),
        "a": poly_terms_json(&dec.plus),
        "b": poly_terms_json(&dec.minus),
    }))
}

fn monic_div(p: &Value, o: &Options) -> Result<Value> {
    let ring = ring_field(p)?;
    let vars = shared_vars(p, &ring, &["f", "g"])?;
    let f = poly_field(p, "f", &ring, &vars)?;
    let g = poly_field(p, "g", &ring, &vars)?;
    let (q, r) = monic_divide(&f, &g)?;
    if o.verify && (&(&q * &g) + &r != f || r.degree().unwrap_or(-1) >= g.degree().unwrap_or(0)) {
        return Err(replay_failed("f = q g + r"));
    }
    Ok(json!({"q": poly_terms_json(&q), "r": poly_terms_json(&r)}))
}

fn homog(p: &Value, o: &Options) -> Result<Value> {
    let (_, f) = single_poly(p, "p")?;
    let comps = homogeneous_components(&f)?;
    if o.verify {
        let sum = comps.values().fold(f.zero_like(), |acc, c| &acc + c);
        if sum != f || comps.iter().any(|(d, c)| !is_homogeneous_of_degree(c, *d)) {
            return Err(replay_failed("sum of homogeneous components"));
        }
    }
    let list: Vec<Value> = comps.iter().map(|(d, c)| json!({"degree": d, "p": poly_terms_json(c)})).collect();
    Ok(json!({"components": list}))
}

fn horrocks(p: &Value, o: &Options) -> Result<Value> {
    let ring = ring_field(p)?;
    // `generators` is accepted as the long name of `u`
    let key = if p.get("u").is_none() && p.get("generators").is_some() { "generators" } else { "u" };
    let vars = shared_vars(p, &ring, &[key, "f", "witness"])?;
    let u = polys_field(p, key, &ring, &vars)?;
    let f = poly_field(p, "f", &ring, &vars)?;
    let witness = p.get("witness").map(|w| polys_from_json(w, Some(&ring), Some(&vars))).transpose()?;
    let res = principal_generator(&u, &f, witness.as_deref())?;
    if o.verify {
        if !res.generator.verify(&u) {
            return Err(replay_failed("generator membership certificates"));
        }
        check_witness(&u, &f, &res.witness)?;
        if res.tree.as_ref().is_some_and(|t| !t.comaximal(&ring)) {
            return Err(replay_failed("comaximality of the branch cover"));
        }
    }
    let tree = res.tree.as_ref().map(|t| json!({"leaves": t.leaves.len(), "depth": t.depth, "questions": t.questions}));
    Ok(json!({
        "generator": poly_terms_json(&res.generator.g),
        "intoCert": polys_terms_json(&res.generator.into_cert),
        "fromCerts": polys_terms_json(&res.generator.from_certs),
        "witness": polys_terms_json(&res.witness),
        "leaves": tree,
    }))
}

fn cocycle_check(p: &Value, _: &Options) -> Result<Value> {
    let c = cocycle_payload(p)?;
    let check = check_cocycle(&c);
    Ok(json!({"ok": check.ok, "violation": check.violation}))
}

fn classification(c: CocycleData, o: &Options) -> Result<Value> {
    let mut bundle = LineBundle::new(c);
    let (degree, s) = classify_line_bundle(&mut bundle)?;
    if o.verify && !bundle.classification.as_ref().is_some_and(|n| n.verify(&bundle.cocycle)) {
        return Err(replay_failed("t_ij = (X_j/X_i)^N s_j/s_i"));
    }
    Ok(json!({"degree": degree, "s": polys_terms_json(&s)}))
}

fn cocycle_normalize(p: &Value, o: &Options) -> Result<Value> {
    let c = cocycle_payload(p)?;
    let n = normalize_cocycle(&c)?;
    if o.verify && !n.verify(&c) {
        return Err(replay_failed("t_ij = (X_j/X_i)^N s_j/s_i"));
    }
    Ok(json!({"degree": n.degree, "s": polys_terms_json(&n.s)}))
}

fn pic_twist(p: &Value, o: &Options) -> Result<Value> {
    let ring = ring_field(p)?;
    let n = as_u64(field(p, "n")?, "n")? as usize;
    let d = as_i64(field(p, "d")?, "d")?;
    let c = twisting_cocycle(n, d, &ring)?;
    if o.verify && !check_cocycle(&c).ok {
        return Err(replay_failed("cocycle identities"));
    }
    Ok(json!({"cocycle": cocycle_to_json(&c)}))
}

fn pic_classify(p: &Value, o: &Options) -> Result<Value> {
    classification(cocycle_payload(p)?, o)
}

fn point_field(p: &Value, key: &str) -> Result<crate::projspace::ProjPoint> {
    let ring = ring_opt(p)?;
    point_from_json(field(p, key)?, ring.as_ref())
}

fn veronese(p: &Value, o: &Options) -> Result<Value> {
    let x = point_field(p, "point")?;
    let d = u32_field(p, "d")?;
    let z = veronese_map(d, &x)?;
    if o.verify && veronese_inverse(x.dim(), d, &z)? != x {
        return Err(replay_failed("Veronese inverse round trip"));
    }
    Ok(json!({"n": x.dim(), "d": d, "coords": veronese_coords_json(x.dim(), d, &z), "point": point_to_json(&z)}))
}

fn veronese_target(p: &Value, n: usize, d: u32) -> Result<crate::projspace::ProjPoint> {
    let zv = field(p, "z")?;
    let labelled = zv.as_array().and_then(|a| a.first()).is_some_and(|f| f.get("index").is_some());
    if !labelled {
        return point_field(p, "z");
    }
    let ring = ring_field(p)?;
    let idx = multi_indices(n, d);
    let mut coords: Vec<Option<Elem>> = vec![None; idx.len()];
    for item in as_array(zv, "z")? {
        reject_unknown(item, &["index", "value"])?;
        let i: Vec<u32> = as_array(field(item, "index")?, "index")?
            .iter()
            .map(|k| as_u64(k, "index").map(|k| k as u32))
            .collect::<Result<_>>()?;
        let pos = idx.iter().position(|j| *j == i).ok_or_else(|| Error::InvalidInput(format!("bad index {i:?}")))?;
        coords[pos] = Some(elem_from_json(&ring, field(item, "value")?)?);
    }
    let coords: Vec<Elem> = coords
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidInput("missing Veronese coordinates".into()))?;
    normalize_point(&ring, &coords)
}

fn veronese_inv(p: &Value, o: &Options) -> Result<Value> {
    let n = as_u64(field(p, "n")?, "n")? as usize;
    let d = u32_field(p, "d")?;
    let z = veronese_target(p, n, d)?;
    let x = veronese_inverse(n, d, &z)?;
    if o.verify && veronese_map(d, &x)? != z {
        return Err(replay_failed("Veronese forward round trip"));
    }
    Ok(json!({"point": point_to_json(&x)}))
}

fn affine_chart(p: &Value, o: &Options) -> Result<Value> {
    let (ring, q) = single_poly(p, "q")?;
    let d = match p.get("d") {
        Some(_) => u32_field(p, "d")?,
        None => q.total_degree().filter(|&t| t > 0).ok_or_else(|| Error::Precondition("q must have positive degree".into()))?
            as u32,
    };
    let chart = affine_chart_system(&q, d)?;
    let embed = match p.get("point") {
        None => None,
        Some(v) => {
            let x = point_from_json(v, Some(&ring))?;
            let y = chart.embed(&x)?;
            if o.verify && (!chart.satisfies(&y)? || chart.project(&y)? != x) {
                return Err(replay_failed("affine chart embedding"));
            }
            Some(elems_to_json(&ring, &y))
        }
    };
    Ok(json!({
        "n": chart.n,
        "d": d,
        "indices": chart.indices,
        "equations": polys_terms_json(&chart.equations),
        "embed": embed,
    }))
}

fn apply_map(p: &Value, o: &Options) -> Result<Value> {
    let ring = ring_field(p)?;
    let vars = shared_vars(p, &ring, &["p"])?;
    let maps = polys_field(p, "p", &ring, &vars)?;
    let x = point_field(p, "point")?;
    let cert = match p.get("certificate") {
        Some(c) => {
            reject_unknown(c, &["k", "coeffs"])?;
            let k = u32_field(c, "k")?;
            let coeffs = as_array(field(c, "coeffs")?, "coeffs")?
                .iter()
                .map(|row| polys_from_json(row, Some(&ring), Some(&vars)))
                .collect::<Result<Vec<_>>>()?;
            NonvanishingCertificate { k, coeffs }
        }
        None => {
            let d = maps.iter().filter_map(LaurentPoly::total_degree).max().unwrap_or(0).max(1) as u32;
            let max_k = match p.get("max_k") {
                Some(_) => u32_field(p, "max_k")?,
                None => d * vars.len() as u32,
            };
            find_nonvanishing_certificate(&maps, max_k)?
        }
    };
    let y = apply_homogeneous_map(&maps, &cert, &x)?;
    if o.verify {
        // any unit rescaling of the representative gives the same point
        for u in ring.elements().unwrap_or_default().iter().filter(|u| ring.is_unit(u)) {
            let v: Vec<Elem> = x.coords().iter().map(|c| ring.mul(u, c)).collect();
            let scaled = crate::projspace::normalize_point(&ring, &v)?;
            if apply_homogeneous_map(&maps, &cert, &scaled)? != y {
                return Err(replay_failed("representative independence"));
            }
        }
    }
    let coeffs: Vec<Value> = cert.coeffs.iter().map(|r| polys_terms_json(r)).collect();
    Ok(json!({"point": point_to_json(&y), "certificate": {"k": cert.k, "coeffs": coeffs}}))
}

fn pgl(p: &Value, _: &Options) -> Result<Value> {
    let x = point_field(p, "point")?;
    let m = matrix_from_json(field(p, "matrix")?, Some(x.ring()))?;
    Ok(json!({"point": point_to_json(&pgl_act(&m, &x)?)}))
}

fn idempotent_conjugate(p: &Value, o: &Options) -> Result<Value> {
    let ring = ring_opt(p)?;
    let m = matrix_from_json(field(p, "m")?, ring.as_ref())?;
    let e = matrix_from_json(field(p, "e")?, Some(m.ring()))?;
    let c = conjugate_idempotent(&m, &e)?;
    if o.verify && (unconjugate_idempotent(&m, &c)? != e || !c.is_idempotent()) {
        return Err(replay_failed("m^-1 E' m = E"));
    }
    let det = m.det()?;
    Ok(json!({"det": elem_to_json(m.ring(), &det.elem), "conjugate": matrix_to_json(&c)}))
}

fn rank_one(p: &Value, o: &Options) -> std::result::Result<Value, Failure> {
    let ring = ring_opt(p)?;
    let e = matrix_from_json(field(p, "e")?, ring.as_ref())?;
    let cap = match p.get("cap") {
        Some(c) => as_u64(c, "cap")?,
        None => o.cap,
    };
    match rank_one_split(&e, cap as u128)? {
        FreenessResult::Split { x, y } => {
            if o.verify && !verify_split(&e, &x, &y) {
                return Err(replay_failed("x y = E, y x = 1").into());
            }
            Ok(json!({"x": elems_to_json(e.ring(), &x), "y": elems_to_json(e.ring(), &y)}))
        }
        FreenessResult::NonFree(cert) => {
            if o.verify && !verify_nonfree(&e, &cert)? {
                return Err(replay_failed("non-freeness certificate").into());
            }
            let detail = match &cert {
                NonFreeCertificate::Norm { row, search } => format!(
                    "row {row} generates a non-principal ideal of norm {}: u^2 + {} v^2 = {} has no solution",
                    search.ideal_norm, search.d, search.ideal_norm
                ),
                NonFreeCertificate::Exhaustion { searched } => format!("no splitting among {searched} candidates"),
            };
            Err(Failure { error: Error::NonFree(detail), certificate: Some(nonfree_json(&cert)) })
        }
    }
}

fn ideal_principal(p: &Value, o: &Options) -> Result<Value> {
    let ring = ring_field(p)?;
    let gens = elems_from_json(&ring, field(p, "gens")?)?;
    let res = ideal_norm_principality(&ring, &gens)?;
    if let (true, Some(g)) = (o.verify, &res.generator) {
        let combo = res.combination.iter().zip(&gens).fold(ring.zero(), |acc, (c, a)| ring.add(&acc, &ring.mul(c, a)));
        let divides = res.cofactors.iter().zip(&gens).all(|(c, a)| ring.mul(c, g) == *a);
        if combo != *g || !divides || res.cofactors.len() != gens.len() {
            return Err(replay_failed("principal generator certificates"));
        }
    }
    Ok(json!({
        "principal": res.generator.is_some(),
        "generator": res.generator.as_ref().map(|g| elem_to_json(&ring, g)),
        "cofactors": elems_to_json(&ring, &res.cofactors),
        "combination": elems_to_json(&ring, &res.combination),
        "norm_search": norm_search_json(&res.search),
    }))
}

fn oracle_task(p: &Value, o: &Options) -> Result<Value> {
    let task = field(p, "task")?.as_str().ok_or_else(|| Error::InvalidInput("task must be a string".into()))?;
    let report = match task {
        "points" => oracle::points_report(as_u64(field(p, "n")?, "n")? as usize, &ring_field(p)?, o.cap)?,
        "units" => oracle::units_report(&ring_field(p)?, o.cap)?,
        "locality" => oracle::locality_report(&ring_field(p)?, o.cap)?,
        "inverse" => {
            let (_, f) = single_poly(p, "p")?;
            oracle::inverse_report(&f, as_u64(field(p, "bound")?, "bound")? as usize, o.cap)?
        }
        "gl-criterion" => oracle::gl_criterion_report(&ring_field(p)?, as_u64(field(p, "m")?, "m")? as usize, o.cap)?,
        other => return Err(Error::InvalidInput(format!("unknown oracle task {other:?}; expected one of {ORACLE_TASKS:?}"))),
    };
    Ok(report_json(&report))
}

/// Runs one command on its payload.
pub fn execute(command: &str, payload: &Value, o: &Options) -> std::result::Result<Value, Failure> {
    let f: fn(&Value, &Options) -> Result<Value> = match command {
        "ring-info" => ring_info,
        "poly-unit" => poly_unit,
        "poly-nilpotent" => poly_nilpotent,
        "laurent-decompose" => laurent_decompose,
        "monic-divide" => monic_div,
        "homog-components" => homog,
        "horrocks" => horrocks,
        "cocycle-check" => cocycle_check,
        "cocycle-normalize" => cocycle_normalize,
        "pic-twist" => pic_twist,
        "pic-classify" => pic_classify,
        "veronese" => veronese,
        "veronese-inv" => veronese_inv,
        "affine-chart" => affine_chart,
        "apply-map" => apply_map,
        "pgl-act" => pgl,
        "idempotent-conjugate" => idempotent_conjugate,
        "rank-one-split" => return rank_one(payload, o),
        "ideal-principal" => ideal_principal,
        "oracle" => oracle_task,
        other => return Err(Error::InvalidInput(format!("unknown command {other:?}")).into()),
    };
    if !payload.is_object() {
        return Err(Error::InvalidInput("payload must be an object".into()).into());
    }
    Ok(f(payload, o)?)
}

// ---- envelopes -------------------------------------------------------------------

/// Output envelope and exit code for one job.
pub fn run_job(job: &Value, base: &Options) -> (Value, i32) {
    let env: JobEnvelope = match serde_json::from_value(job.clone()) {
        Ok(e) => e,
        Err(e) => {
            let err = Error::InvalidInput(format!("bad job envelope: {e}"));
            return (json!({"v": 1, "error": failure_json(&err.clone().into())}), exit_code(&err));
        }
    };
    let mut o = *base;
    if let Some(eo) = &env.options {
        o.verify |= eo.verify.unwrap_or(false);
        o.seed = eo.seed.unwrap_or(o.seed);
        o.cap = eo.cap.unwrap_or(o.cap);
    }
    let mut out = json!({"v": 1, "command": env.command, "options": o.to_json(), "payload": env.payload});
    if env.v != 1 {
        let err = Error::InvalidInput(format!("unsupported schema version {}", env.v));
        out["error"] = failure_json(&err.clone().into());
        return (out, exit_code(&err));
    }
    match execute(&env.command, &env.payload, &o) {
        Ok(r) => {
            out["result"] = r;
            (out, EXIT_OK)
        }
        Err(f) => {
            out["error"] = failure_json(&f);
            (out, exit_code(&f.error))
        }
    }
}

/// Runs a single job or a batch (array); batch exit code is the largest one.
pub fn run_jobs(input: &Value, base: &Options) -> (Value, i32) {
    match input {
        Value::Array(jobs) => {
            let outs: Vec<(Value, i32)> = jobs.par_iter().map(|j| run_job(j, base)).collect();
            let code = outs.iter().map(|(_, c)| *c).max().unwrap_or(EXIT_OK);
            (Value::Array(outs.into_iter().map(|(v, _)| v).collect()), code)
        }
        _ => run_job(input, base),
    }
}

/// Re-runs every job recorded in a result file with verification on and
/// checks that the recorded outcome is reproduced exactly.
pub fn verify_results(input: &Value) -> (Value, i32) {
    let records: Vec<&Value> = match input {
        Value::Array(xs) => xs.iter().collect(),
        other => vec![other],
    };
    let checks: Vec<(bool, String)> = records
        .par_iter()
        .map(|rec| {
            let (Some(cmd), Some(payload)) = (rec.get("command"), rec.get("payload")) else {
                return (false, "record without command or payload".into());
            };
            let mut job = json!({"v": rec.get("v").cloned().unwrap_or(json!(1)), "command": cmd, "payload": payload});
            if let Some(o) = rec.get("options") {
                job["options"] = o.clone();
            }
            job["options"]["verify"] = json!(true);
            let (out, _) = run_job(&job, &Options::default());
            let same = out.get("result") == rec.get("result") && out.get("error") == rec.get("error");
            let label = cmd.as_str().unwrap_or("?").to_string();
            (same, label)
        })
        .collect();
    let failed: Vec<String> = checks.iter().enumerate().filter(|(_, (ok, _))| !ok).map(|(i, (_, c))| format!("{i}:{c}")).collect();
    let summary = json!({"checked": checks.len(), "failed": failed});
    if failed.is_empty() {
        (json!({"v": 1, "command": "verify", "result": summary}), EXIT_OK)
    } else {
        let err = Error::CertificateInvalid(format!("{} record(s) did not replay", failed.len()));
        (json!({"v": 1, "command": "verify", "result": summary, "error": failure_json(&err.clone().into())}), EXIT_MATH)
    }
}

// ---- command line ------------------------------------------------------------------

fn command_names() -> Vec<&'static str> {
    let mut v = COMMANDS.to_vec();
    v.extend(["run", "verify"]);
    v
}

/// Exact algebra over explicit rings, driven by JSON jobs.
#[derive(Debug, Parser)]
#[command(name = "projic", version)]
pub struct Cli {
    /// Operation to run; `run` executes job envelopes, `verify` replays a result file.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(command_names()))]
    pub command: String,
    /// Input JSON file (payload, envelope or array of envelopes); stdin when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Replay every attached certificate before emitting a result.
    #[arg(long)]
    pub verify: bool,
    /// Evaluation cap for exhaustive searches (overrides PROJIC_CAP).
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Oracle task: points, units, locality, inverse or gl-criterion.
    #[arg(long)]
    pub task: Option<String>,
    /// Payload field `ring`, as JSON or ring text such as `Z/4`.
    #[arg(long)]
    pub ring: Option<String>,
    /// Payload field `n`.
    #[arg(long)]
    pub n: Option<u64>,
    /// Payload field `d`.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
}

impl Cli {
    fn payload_flags(&self) -> Vec<(&'static str, Value)> {
        let mut out = Vec::new();
        if let Some(r) = &self.ring {
            out.push(("ring", serde_json::from_str(r).unwrap_or_else(|_| json!(r))));
        }
        if let Some(n) = self.n {
            out.push(("n", json!(n)));
        }
        if let Some(d) = self.d {
            out.push(("d", json!(d)));
        }
        out
    }
}

fn is_envelope(v: &Value) -> bool {
    v.get("v").is_some() && v.get("command").is_some()
}

/// Turns the input of an operation subcommand into envelopes.
fn as_jobs(command: &str, input: Value, task: Option<&str>) -> Value {
    let wrap = |mut p: Value| {
        if is_envelope(&p) {
            return p;
        }
        if let (Some(t), Some(obj)) = (task, p.as_object_mut()) {
            obj.entry("task").or_insert(json!(t));
        }
        json!({"v": 1, "command": command, "payload": p})
    };
    match input {
        Value::Array(xs) => Value::Array(xs.into_iter().map(wrap).collect()),
        other => wrap(other),
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let fail = |e: Error| {
        eprintln!("{}", json!({"error": failure_json(&e.clone().into())}));
        exit_code(&e)
    };
    let flags = cli.payload_flags();
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
        None if !flags.is_empty() => Ok("{}".to_string()),
        None => std::io::read_to_string(std::io::stdin()).map_err(|e| Error::InvalidInput(e.to_string())),
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let mut input: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return fail(Error::InvalidInput(format!("input is not JSON: {e}"))),
    };
    if !flags.is_empty() {
        let envelope = is_envelope(&input);
        match input.as_object_mut() {
            Some(obj) if !envelope => obj.extend(flags.into_iter().map(|(k, v)| (k.to_string(), v))),
            _ => return fail(Error::InvalidInput("--ring, --n and --d need a single payload object".into())),
        }
    }
    let mut base = match Options::from_env() {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    base.verify = cli.verify;
    let (out, code) = match cli.command.as_str() {
        "verify" => verify_results(&input),
        cmd => {
            let jobs = if cmd == "run" { input } else { as_jobs(cmd, input, cli.task.as_deref()) };
            // flags beat envelope options, which beat the environment
            let jobs = override_options(jobs, cli.cap, cli.seed);
            run_jobs(&jobs, &base)
        }
    };
    let rendered = serde_json::to_string_pretty(&out).expect("serializable") + "\n";
    let written = match &cli.output {
        Some(path) => std::fs::write(path, rendered).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    };
    match written {
        Ok(()) => code,
        Err(e) => fail(e),
    }
}

fn override_options(jobs: Value, cap: Option<u64>, seed: Option<u64>) -> Value {
    if cap.is_none() && seed.is_none() {
        return jobs;
    }
    let apply = |mut j: Value| {
        if let Some(obj) = j.as_object_mut() {
            let o = obj.entry("options").or_insert(json!({}));
            if let Some(c) = cap {
                o["cap"] = json!(c);
            }
            if let Some(s) = seed {
                o["seed"] = json!(s);
            }
        }
        j
    };
    match jobs {
        Value::Array(xs) => Value::Array(xs.into_iter().map(apply).collect()),
        other => apply(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(cmd: &str, payload: Value) -> (Value, i32) {
        run_job(&json!({"v": 1, "command": cmd, "payload": payload, "options": {"verify": true}}), &Options::default())
    }

    #[test]
    fn laurent_example() {
        let (out, code) = run("laurent-decompose", json!({"ring": "Z/4", "p": "2+3X+2X^2"}));
        assert_eq!(code, 0, "{out}");
        let r = &out["result"];
        assert_eq!((r["l"].clone(), r["u"].clone()), (json!(1), json!(3)));
        assert_eq!(r["a"]["terms"], json!([{"exp": [1], "coef": 2}]));
        assert_eq!(r["b"]["terms"], json!([{"exp": [-1], "coef": 2}]));
    }

    #[test]
    fn classify_example() {
        let (tw, _) = run("pic-twist", json!({"ring": "Z/4", "n": 1, "d": 2}));
        let (out, code) = run("pic-classify", json!({"bundle": tw["result"]["cocycle"]}));
        assert_eq!(code, 0, "{out}");
        assert_eq!(out["result"]["degree"], json!(2));
    }

    #[test]
    fn error_classes() {
        let (out, code) = run("horrocks", json!({"ring": "Z/4", "u": ["X+2", "2X"], "f": "X^2", "witness": ["1", "0"]}));
        assert_eq!((code, out["error"]["code"].clone()), (3, json!("WitnessInvalid")));
        let (_, code) = run("poly-unit", json!({"ring": "Z/4"}));
        assert_eq!(code, 2);
        let (out, code) = run_job(&json!({"v": 1, "command": "ring-info", "payload": {"ring": "Z"}, "extra": 0}), &Options::default());
        assert_eq!(code, 2, "{out}");
        let (out, code) = run("oracle", json!({"task": "points", "ring": "Z/4", "n": 12}));
        assert_eq!((code, out["error"]["code"].clone()), (4, json!("CapExceeded")));
        let e = json!({"ring": {"kind": "quotient", "base": "Z", "var": "x", "modulus": [5, 0, 1]},
            "e": [[3, "x-1"], ["1+x", -2]]});
        let (out, code) = run("rank-one-split", e);
        assert_eq!((code, out["error"]["code"].clone()), (3, json!("NonFree")), "{out}");
        assert_eq!(out["error"]["certificate"]["search"]["ideal_norm"], json!(3));
    }

    #[test]
    fn verify_replays() {
        let (a, _) = run("veronese", json!({"ring": "Z/4", "point": [1, 2], "d": 2}));
        let (b, _) = run("poly-unit", json!({"ring": "Z/4", "p": "X"}));
        let (_, code) = verify_results(&json!([a.clone(), b]));
        assert_eq!(code, 0);
        let mut tampered = a;
        tampered["result"]["point"]["coords"] = json!([1, 0, 0]);
        assert_eq!(verify_results(&tampered).1, 3);
    }
}
