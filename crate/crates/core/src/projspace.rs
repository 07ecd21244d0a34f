//! Points of projective space over local rings, the Veronese embedding,
//! affine charts of hypersurface complements and homogeneous maps.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::solve_module;
use crate::matrix::RingMatrix;
use crate::poly::{is_homogeneous_of_degree, LaurentPoly};
use crate::ring::{Elem, Ring, MAX_ENUMERATED};

/// A point `[x_0 : ... : x_n]` in canonical form: the leftmost unit coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    ring: Ring,
    coords: Vec<Elem>,
}

impl ProjPoint {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    /// Dimension `n` of the ambient projective space.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| self.ring.show(c)).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

pub(crate) fn require_local(ring: &Ring) -> Result<()> {
    match ring.is_local() {
        Ok(true) => Ok(()),
        Ok(false) => Err(Error::NotLocal(format!("{} is not a local ring", ring.describe()))),
        Err(e) => Err(e),
    }
}

/// Canonical representative of the class of `v` modulo units.
pub fn normalize_point(ring: &Ring, v: &[Elem]) -> Result<ProjPoint> {
    require_local(ring)?;
    normalize_local(ring, v)
}

fn normalize_local(ring: &Ring, v: &[Elem]) -> Result<ProjPoint> {
    if v.is_empty() {
        return Err(Error::InvalidInput("a point needs at least one coordinate".into()));
    }
    for x in v {
        ring.check_elem(x)?;
    }
    let inv = v.iter().find_map(|x| ring.try_invert(x)).ok_or(Error::NotUnimodular)?;
    Ok(ProjPoint { ring: ring.clone(), coords: v.iter().map(|x| ring.mul(x, &inv)).collect() })
}

// ---- Veronese --------------------------------------------------------------------

/// Exponent vectors of degree `d` in `n + 1` variables, lexicographically descending.
pub fn multi_indices(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for i in (0..=d).rev() {
            prefix.push(i);
            rec(n, d - i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n + 1), &mut out);
    out
}

fn monomial_value(ring: &Ring, x: &[Elem], index: &[u32]) -> Elem {
    x.iter().zip(index).fold(ring.one(), |acc, (xi, &e)| ring.mul(&acc, &ring.pow(xi, e as u64)))
}

fn require_degree(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::Precondition("the Veronese degree must be positive".into()));
    }
    Ok(())
}

/// `z_I = x^I` for all `|I| = d`.
pub fn veronese_map(d: u32, p: &ProjPoint) -> Result<ProjPoint> {
    require_degree(d)?;
    let ring = &p.ring;
    let z: Vec<Elem> = multi_indices(p.dim(), d).iter().map(|i| monomial_value(ring, &p.coords, i)).collect();
    normalize_local(ring, &z)
}

/// First violated relation `z_I z_J = z_K z_L` with `I + J = K + L`, if any.
pub fn quadric_violation(n: usize, d: u32, z: &[Elem], ring: &Ring) -> Option<String> {
    let idx = multi_indices(n, d);
    let mut by_sum: BTreeMap<Vec<u32>, (usize, usize, Elem)> = BTreeMap::new();
    for a in 0..idx.len() {
        for b in a..idx.len() {
            let sum: Vec<u32> = idx[a].iter().zip(&idx[b]).map(|(x, y)| x + y).collect();
            let prod = ring.mul(&z[a], &z[b]);
            match by_sum.get(&sum) {
                None => {
                    by_sum.insert(sum, (a, b, prod));
                }
                Some((k, l, first)) if *first != prod => {
                    return Some(format!(
                        "z{:?} z{:?} = {} but z{:?} z{:?} = {}",
                        idx[a],
                        idx[b],
                        ring.show(&prod),
                        idx[*k],
                        idx[*l],
                        ring.show(first)
                    ));
                }
                _ => {}
            }
        }
    }
    None
}

/// Number of coordinates of the Veronese target space.
pub fn veronese_target_len(n: usize, d: u32) -> usize {
    multi_indices(n, d).len()
}

/// Inverse of the Veronese map on its image, by the chart formulas
/// `x_l = z_I`, `x_k = z_{I - e_l + e_k}` for a unit `z_I` with `i_l > 0`.
/// Every applicable chart is evaluated and required to agree.
pub fn veronese_inverse(n: usize, d: u32, z: &ProjPoint) -> Result<ProjPoint> {
    require_degree(d)?;
    let ring = &z.ring;
    let idx = multi_indices(n, d);
    if z.coords.len() != idx.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} Veronese coordinates, got {}",
            idx.len(),
            z.coords.len()
        )));
    }
    if let Some(v) = quadric_violation(n, d, &z.coords, ring) {
        return Err(Error::QuadricViolated(v));
    }
    let position: BTreeMap<&Vec<u32>, usize> = idx.iter().enumerate().map(|(k, i)| (i, k)).collect();
    let mut result: Option<ProjPoint> = None;
    for (a, index) in idx.iter().enumerate() {
        if !ring.is_unit(&z.coords[a]) {
            continue;
        }
        for l in (0..=n).filter(|&l| index[l] > 0) {
            let x: Vec<Elem> = (0..=n)
                .map(|k| {
                    if k == l {
                        return z.coords[a].clone();
                    }
                    let mut j = index.clone();
                    j[l] -= 1;
                    j[k] += 1;
                    z.coords[position[&j]].clone()
                })
                .collect();
            let p = normalize_local(ring, &x)?;
            match &result {
                None => result = Some(p),
                Some(q) if *q != p => {
                    return Err(Error::QuadricViolated(format!("charts disagree: {q} vs {p}")));
                }
                _ => {}
            }
        }
    }
    result.ok_or(Error::NoChart)
}

// ---- affine charts of hypersurface complements -------------------------------------

/// The affine subset `sum q_I y_I = 1` of the Veronese image, as polynomial
/// equations in `y_0..y_N` (each equation means `= 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChart {
    pub n: usize,
    pub d: u32,
    pub q: LaurentPoly,
    pub indices: Vec<Vec<u32>>,
    pub equations: Vec<LaurentPoly>,
}

pub fn affine_chart_system(q: &LaurentPoly, d: u32) -> Result<AffineChart> {
    require_degree(d)?;
    if q.nvars() == 0 {
        return Err(Error::Precondition("q needs at least one variable".into()));
    }
    if !q.is_polynomial() || !is_homogeneous_of_degree(q, d as i64) {
        return Err(Error::NotHomogeneous(format!("{q} is not homogeneous of degree {d}")));
    }
    let n = q.nvars() - 1;
    let ring = q.ring();
    let indices = multi_indices(n, d);
    let names: Vec<String> = (0..indices.len()).map(|k| format!("y{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let zero = LaurentPoly::zero(ring, &refs);
    let var = |k: usize| zero.var_like(k);
    let mut linear = -&zero.one_like();
    for (k, index) in indices.iter().enumerate() {
        let exp: Vec<i64> = index.iter().map(|&e| e as i64).collect();
        linear = &linear + &var(k).scale(&q.coeff(&exp));
    }
    let mut equations = vec![linear];
    let mut first: BTreeMap<Vec<u32>, (usize, usize)> = BTreeMap::new();
    for a in 0..indices.len() {
        for b in a..indices.len() {
            let sum: Vec<u32> = indices[a].iter().zip(&indices[b]).map(|(x, y)| x + y).collect();
            match first.get(&sum) {
                None => {
                    first.insert(sum, (a, b));
                }
                Some(&(k, l)) => equations.push(&(&var(a) * &var(b)) - &(&var(k) * &var(l))),
            }
        }
    }
    Ok(AffineChart { n, d, q: q.clone(), indices, equations })
}

impl AffineChart {
    /// `V(v) / q(v)` for a representative `v` of `p`.
    pub fn embed(&self, p: &ProjPoint) -> Result<Vec<Elem>> {
        if p.dim() != self.n {
            return Err(Error::InvalidInput("point dimension does not match q".into()));
        }
        let ring = p.ring();
        let qv = self.q.eval(p.coords())?;
        let inv = ring
            .try_invert(&qv)
            .ok_or_else(|| Error::QNotUnitAtPoint(format!("q{p} = {}", ring.show(&qv))))?;
        Ok(self.indices.iter().map(|i| ring.mul(&monomial_value(ring, p.coords(), i), &inv)).collect())
    }

    pub fn satisfies(&self, y: &[Elem]) -> Result<bool> {
        for eq in &self.equations {
            if !eq.ring().is_zero(&eq.eval(y)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Point of projective `n`-space corresponding to a solution `y`.
    pub fn project(&self, y: &[Elem]) -> Result<ProjPoint> {
        if !self.satisfies(y)? {
            return Err(Error::InvalidInput("y does not satisfy the chart equations".into()));
        }
        let z = normalize_point(self.q.ring(), y)?;
        veronese_inverse(self.n, self.d, &z)
    }
}

// ---- homogeneous maps --------------------------------------------------------------

/// `X_i^k = sum_j coeffs[i][j] * p_j` for every variable `X_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonvanishingCertificate {
    pub k: u32,
    pub coeffs: Vec<Vec<LaurentPoly>>,
}

fn map_degree(p: &[LaurentPoly]) -> Result<u32> {
    let first = p.first().ok_or_else(|| Error::InvalidInput("a map needs at least one component".into()))?;
    let mut degree: Option<i64> = None;
    for pj in p {
        if pj.ring() != first.ring() || pj.vars() != first.vars() {
            return Err(Error::RingMismatch("map components use different rings or variables".into()));
        }
        if !pj.is_polynomial() {
            return Err(Error::NotHomogeneous(format!("{pj} has negative exponents")));
        }
        let Some(t) = pj.total_degree() else { continue };
        if !is_homogeneous_of_degree(pj, t) {
            return Err(Error::NotHomogeneous(format!("{pj}")));
        }
        match degree {
            None => degree = Some(t),
            Some(d) if d != t => return Err(Error::DegreeMismatch(format!("components of degrees {d} and {t}"))),
            _ => {}
        }
    }
    degree.map(|d| d as u32).ok_or_else(|| Error::CertificateInvalid("all components vanish".into()))
}

fn power_of_var(like: &LaurentPoly, i: usize, k: u32) -> LaurentPoly {
    let mut e = vec![0; like.nvars()];
    e[i] = k as i64;
    like.monomial_like(e, like.ring().one())
}

pub fn verify_nonvanishing_certificate(p: &[LaurentPoly], cert: &NonvanishingCertificate) -> Result<()> {
    map_degree(p)?;
    let like = &p[0];
    if cert.coeffs.len() != like.nvars() {
        return Err(Error::CertificateInvalid(format!("expected {} identities", like.nvars())));
    }
    for (i, row) in cert.coeffs.iter().enumerate() {
        if row.len() != p.len() {
            return Err(Error::CertificateInvalid(format!("identity {i} has the wrong length")));
        }
        let sum = row.iter().zip(p).fold(like.zero_like(), |acc, (c, pj)| &acc + &(c * pj));
        if sum != power_of_var(like, i, cert.k) {
            return Err(Error::CertificateInvalid(format!("X{i}^{} != {sum}", cert.k)));
        }
    }
    Ok(())
}

/// Monomials of degree `d` in `nvars` variables as exponent vectors.
fn monomials(nvars: usize, d: u32) -> Vec<Vec<i64>> {
    multi_indices(nvars - 1, d).into_iter().map(|v| v.into_iter().map(i64::from).collect()).collect()
}

/// Searches a certificate with `k` between `deg p` and `max_k` by solving
/// the linear system for homogeneous coefficients of degree `k - deg p`.
pub fn find_nonvanishing_certificate(p: &[LaurentPoly], max_k: u32) -> Result<NonvanishingCertificate> {
    let d = map_degree(p)?;
    let like = &p[0];
    let ring = like.ring();
    let nv = like.nvars();
    for k in d..=max_k {
        let shifts = monomials(nv, k - d);
        let targets = monomials(nv, k);
        let dense = |f: &LaurentPoly| -> Vec<Elem> { targets.iter().map(|e| f.coeff(e)).collect() };
        let mut gens = Vec::new();
        for pj in p {
            for s in &shifts {
                gens.push(dense(&pj.mul_monomial(s, &ring.one())));
            }
        }
        let mut coeffs = Vec::with_capacity(nv);
        for i in 0..nv {
            let Some(a) = solve_module(ring, &gens, &dense(&power_of_var(like, i, k))) else { break };
            let row: Vec<LaurentPoly> = (0..p.len())
                .map(|j| {
                    shifts.iter().enumerate().fold(like.zero_like(), |acc, (t, s)| {
                        &acc + &like.monomial_like(s.clone(), a[j * shifts.len() + t].clone())
                    })
                })
                .collect();
            coeffs.push(row);
        }
        if coeffs.len() == nv {
            let cert = NonvanishingCertificate { k, coeffs };
            verify_nonvanishing_certificate(p, &cert)?;
            return Ok(cert);
        }
    }
    Err(Error::CertificateInvalid(format!("no variable power up to degree {max_k} lies in the ideal of the map")))
}

/// `[p_0(v) : ... : p_m(v)]`.
pub fn apply_homogeneous_map(p: &[LaurentPoly], cert: &NonvanishingCertificate, x: &ProjPoint) -> Result<ProjPoint> {
    verify_nonvanishing_certificate(p, cert)?;
    if p[0].nvars() != x.coords.len() {
        return Err(Error::InvalidInput("map and point dimensions differ".into()));
    }
    if p[0].ring() != x.ring() {
        return Err(Error::RingMismatch("map and point live over different rings".into()));
    }
    let values: Vec<Elem> = p.iter().map(|pj| pj.eval(&x.coords)).collect::<Result<_>>()?;
    normalize_local(&x.ring, &values)
}

// ---- linear automorphisms ------------------------------------------------------------

pub fn pgl_act(m: &RingMatrix, x: &ProjPoint) -> Result<ProjPoint> {
    if !m.is_square() || m.rows() != x.coords.len() {
        return Err(Error::InvalidInput("matrix size does not match the point".into()));
    }
    if m.ring() != x.ring() {
        return Err(Error::RingMismatch("matrix and point live over different rings".into()));
    }
    let det = m.det()?;
    if det.try_invert().is_none() {
        return Err(Error::DetNotUnit(det.to_string()));
    }
    let ring = x.ring();
    let v: Vec<Elem> = (0..m.rows())
        .map(|i| (0..m.cols()).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&m.get(i, j).elem, &x.coords[j]))))
        .collect();
    normalize_local(ring, &v)
}

/// `(no non-zero vector is killed by M, det M is a unit)` over a finite ring.
pub fn gl_iff_nonvanishing(m: &RingMatrix) -> Result<(bool, bool)> {
    let ring = m.ring().clone();
    if !ring.is_finite() {
        return Err(Error::RingNotFinite(ring.describe()));
    }
    if !m.is_square() {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    let rhs = m.det()?.try_invert().is_some();
    let elems = ring.elements()?;
    let size = m.cols();
    let total = (elems.len() as u128).checked_pow(size as u32).unwrap_or(u128::MAX);
    if total > MAX_ENUMERATED {
        return Err(Error::DomainTooLarge(format!("{total} vectors")));
    }
    let mut idx = vec![0usize; size];
    let lhs = 'scan: loop {
        let nonzero = idx.iter().any(|&i| !ring.is_zero(&elems[i]));
        if nonzero {
            let killed = (0..m.rows()).all(|r| {
                let s = (0..size).fold(ring.zero(), |acc, c| ring.add(&acc, &ring.mul(&m.get(r, c).elem, &elems[idx[c]])));
                ring.is_zero(&s)
            });
            if killed {
                break 'scan false;
            }
        }
        let mut k = 0;
        loop {
            if k == size {
                break 'scan true;
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    };
    Ok((lhs, rhs))
}
