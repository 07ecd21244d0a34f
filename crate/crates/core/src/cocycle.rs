//! Unit cocycles on the standard affine cover of projective `n`-space.
//!
//! Elements of `T(A)`, `T_i(A)` and `T_ij(A)` are Laurent polynomials in
//! `X0..Xn` whose exponent vectors sum to zero; the charts only differ in which
//! exponents may be negative. A cocycle `t_ij` is normalized into
//! `t_ij = (X_j/X_i)^N * s_j / s_i` with `s_i` a unit of `T_i(A)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{inverse_one_plus_nil, laurent_unit_decompose, nil_ideal_bound, unit_inverse, LaurentPoly};
use crate::ring::{Elem, Ring};

/// Which exponents may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// `T(A)`: any exponent vector summing to zero.
    Total,
    /// `T_i(A)`: only `p_i` may be negative.
    Chart(usize),
    /// `T_ij(A)`: only `p_i`, `p_j` may be negative.
    Pair(usize, usize),
}

impl Support {
    pub fn admits(&self, p: &[i64]) -> bool {
        if p.iter().sum::<i64>() != 0 {
            return false;
        }
        p.iter().enumerate().all(|(l, &x)| {
            x >= 0
                || match *self {
                    Support::Total => true,
                    Support::Chart(i) => l == i,
                    Support::Pair(i, j) => l == i || l == j,
                }
        })
    }

    pub fn contains(&self, u: &LaurentPoly) -> bool {
        u.terms().all(|(p, _)| self.admits(p))
    }
}

pub fn var_names(n: usize) -> Vec<String> {
    (0..=n).map(|i| format!("X{i}")).collect()
}

/// `(X_j/X_i)^d` in `n + 1` variables.
pub fn ratio_power(ring: &Ring, n: usize, i: usize, j: usize, d: i64) -> LaurentPoly {
    let names = var_names(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut e = vec![0; n + 1];
    if i != j {
        e[i] = -d;
        e[j] = d;
    }
    LaurentPoly::from_terms(ring, &refs, [(e, ring.one())])
}

/// Splitting of an element of `T_ij(A)` by the monoids `{0}`, `M_i`, `M_j`, `M_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedParts {
    pub constant: Elem,
    pub x: LaurentPoly,
    pub y: LaurentPoly,
    pub z: LaurentPoly,
}

pub fn graded_decompose(u: &LaurentPoly, i: usize, j: usize) -> Result<GradedParts> {
    if !Support::Pair(i, j).contains(u) {
        return Err(Error::Precondition(format!("{u} is not supported on the chart pair ({i},{j})")));
    }
    let x = u.filter_terms(|p| p[i] < 0 && p[j] >= 0);
    let y = u.filter_terms(|p| p[j] < 0 && p[i] >= 0);
    let z = u.filter_terms(|p| p[i] < 0 && p[j] < 0);
    Ok(GradedParts { constant: u.constant_term(), x, y, z })
}

/// Transition functions `t_ij` for all `i != j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleData {
    n: usize,
    ring: Ring,
    entries: BTreeMap<(usize, usize), LaurentPoly>,
}

impl CocycleData {
    /// Builds a cocycle from entries with `i < j`; the entries `t_ji` are the inverses.
    /// Entries with `i > j` may be given too and are then kept as supplied.
    pub fn new(n: usize, ring: &Ring, given: impl IntoIterator<Item = ((usize, usize), LaurentPoly)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("dimension must be at least 1".into()));
        }
        let names = var_names(n);
        let mut entries = BTreeMap::new();
        for ((i, j), t) in given {
            if i == j || i > n || j > n {
                return Err(Error::InvalidInput(format!("bad entry index ({i},{j}) for n = {n}")));
            }
            if t.ring() != ring {
                return Err(Error::RingMismatch(format!("entry ({i},{j}) lives in another ring")));
            }
            if t.vars() != names.as_slice() {
                return Err(Error::InvalidInput(format!("entry ({i},{j}) must use variables {}", names.join(","))));
            }
            if entries.insert((i, j), t).is_some() {
                return Err(Error::InvalidInput(format!("duplicate entry ({i},{j})")));
            }
        }
        for i in 0..=n {
            for j in i + 1..=n {
                let t = entries
                    .get(&(i, j))
                    .ok_or_else(|| Error::InvalidInput(format!("missing entry ({i},{j})")))?
                    .clone();
                if !entries.contains_key(&(j, i)) {
                    let inv = unit_inverse(&t)
                        .ok_or_else(|| Error::NotAUnit(format!("t_{i}{j} = {t} is not a unit")))?;
                    entries.insert((j, i), inv);
                }
            }
        }
        Ok(Self { n, ring: ring.clone(), entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// `t_ij`, with `t_ii = 1`.
    pub fn get(&self, i: usize, j: usize) -> LaurentPoly {
        if i == j {
            return ratio_power(&self.ring, self.n, i, i, 0);
        }
        self.entries[&(i, j)].clone()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &LaurentPoly)> {
        self.entries.iter()
    }

    /// Entrywise product (tensor product of line bundles).
    pub fn tensor(&self, other: &CocycleData) -> Result<CocycleData> {
        if self.n != other.n || self.ring != other.ring {
            return Err(Error::InvalidInput("cocycles over different spaces".into()));
        }
        let entries = self.entries.iter().map(|(k, t)| (*k, t * &other.entries[k])).collect();
        Ok(CocycleData { n: self.n, ring: self.ring.clone(), entries })
    }

    /// Entrywise inverse (dual line bundle).
    pub fn dual(&self) -> CocycleData {
        let entries = self.entries.keys().map(|&(i, j)| ((i, j), self.entries[&(j, i)].clone())).collect();
        CocycleData { n: self.n, ring: self.ring.clone(), entries }
    }

    /// Twists by the coboundary of `r`: `t_ij * r_j / r_i`.
    pub fn twist_by(&self, r: &[LaurentPoly]) -> Result<CocycleData> {
        if r.len() != self.n + 1 {
            return Err(Error::InvalidInput("one unit per chart is required".into()));
        }
        let inv: Vec<LaurentPoly> = r
            .iter()
            .map(|x| unit_inverse(x).ok_or_else(|| Error::NotAUnit(format!("{x} is not a unit"))))
            .collect::<Result<_>>()?;
        let entries = self.entries.iter().map(|(&(i, j), t)| ((i, j), &(t * &r[j]) * &inv[i])).collect();
        Ok(CocycleData { n: self.n, ring: self.ring.clone(), entries })
    }
}

/// Outcome of [`check_cocycle`]: `violation` names the first failing identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleCheck {
    pub ok: bool,
    pub violation: Option<String>,
}

pub fn check_cocycle(c: &CocycleData) -> CocycleCheck {
    let fail = |msg: String| CocycleCheck { ok: false, violation: Some(msg) };
    let n = c.n;
    for (&(i, j), t) in &c.entries {
        if !Support::Pair(i, j).contains(t) {
            return fail(format!("t_{i}{j} = {t} is not supported on T_{i}{j}"));
        }
    }
    for i in 0..=n {
        for j in i + 1..=n {
            if !(&c.get(i, j) * &c.get(j, i)).is_one() {
                return fail(format!("t_{i}{j} * t_{j}{i} != 1"));
            }
        }
    }
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                if &c.get(i, j) * &c.get(j, k) != c.get(i, k) {
                    return fail(format!("t_{i}{j} * t_{j}{k} != t_{i}{k}"));
                }
            }
        }
    }
    CocycleCheck { ok: true, violation: None }
}

/// Splits a unit `t` into its unit monomial and the remaining factor with
/// constant term a unit and nilpotent other coefficients.
fn unit_monomial(t: &LaurentPoly) -> Result<(Vec<i64>, Elem)> {
    let ring = t.ring();
    let mut found: Option<(Vec<i64>, Elem)> = None;
    for (p, c) in t.terms() {
        if ring.is_unit(c) {
            if found.is_some() {
                return Err(Error::NotAUnit(format!("{t} has several unit coefficients")));
            }
            found = Some((p.clone(), c.clone()));
        } else if !ring.is_nilpotent(c) {
            return Err(Error::NotAUnit(format!("coefficient {} of {t} is neither a unit nor nilpotent", ring.show(c))));
        }
    }
    found.ok_or_else(|| Error::NotAUnit(format!("{t} has no unit coefficient")))
}

fn require_connected(ring: &Ring) -> Result<()> {
    match ring.is_connected() {
        Ok(false) => Err(Error::NotConnected(format!("{} has non-trivial idempotents", ring.describe()))),
        _ => Ok(()),
    }
}

/// Degree `N` with `t_ij = (X_j/X_i)^N * (unit with nilpotent non-constant part)`.
pub fn cocycle_degree(c: &CocycleData) -> Result<i64> {
    require_connected(&c.ring)?;
    let mut degree: Option<i64> = None;
    for (&(i, j), t) in &c.entries {
        let (p, _) = unit_monomial(t)?;
        let d = p[j];
        let pure = p.iter().enumerate().all(|(l, &x)| if l == i { x == -d } else if l == j { x == d } else { x == 0 });
        if !pure {
            return Err(Error::DegreeMismatch(format!("unit monomial of t_{i}{j} is not a power of X{j}/X{i}")));
        }
        match degree {
            None => degree = Some(d),
            Some(n) if n != d => {
                return Err(Error::DegreeMismatch(format!("t_{i}{j} has degree {d}, expected {n}")));
            }
            _ => {}
        }
    }
    Ok(degree.unwrap_or(0))
}

/// `t_ij = (X_j/X_i)^degree * s_j / s_i`, with the constant term of `s_0` equal to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub degree: i64,
    pub s: Vec<LaurentPoly>,
}

impl Normalization {
    pub fn verify(&self, c: &CocycleData) -> bool {
        if self.s.len() != c.n + 1 {
            return false;
        }
        if self.s.iter().enumerate().any(|(i, s)| !Support::Chart(i).contains(s)) {
            return false;
        }
        let inv: Option<Vec<LaurentPoly>> = self.s.iter().map(unit_inverse).collect();
        let Some(inv) = inv else { return false };
        (0..=c.n).all(|i| {
            (0..=c.n).filter(|&j| j != i).all(|j| {
                let rhs = &(&ratio_power(&c.ring, c.n, i, j, self.degree) * &self.s[j]) * &inv[i];
                rhs == c.get(i, j)
            })
        })
    }

    /// All `s_i` equal to 1, i.e. the cocycle is exactly the twisting cocycle.
    pub fn is_trivial(&self) -> bool {
        self.s.iter().all(LaurentPoly::is_one)
    }
}

/// Normalization computed from the chart pair `(0, 1)`.
pub fn normalize_cocycle(c: &CocycleData) -> Result<Normalization> {
    normalize_cocycle_from(c, 0, 1)
}

/// Normalization computed by eliminating on the chart pair `(p, q)`. The
/// canonical output does not depend on the pair.
pub fn normalize_cocycle_from(c: &CocycleData, p: usize, q: usize) -> Result<Normalization> {
    if p == q || p > c.n || q > c.n {
        return Err(Error::InvalidInput(format!("bad chart pair ({p},{q})")));
    }
    let ring = c.ring.clone();
    require_connected(&ring)?;
    let check = check_cocycle(c);
    if !check.ok {
        return Err(Error::NotACocycle(check.violation.unwrap_or_default()));
    }
    let degree = cocycle_degree(c)?;
    let n = c.n;
    // u_ij = t_ij (X_i/X_j)^N = s_j / s_i
    let u = |i: usize, j: usize| &c.get(i, j) * &ratio_power(&ring, n, i, j, -degree);

    let (sp, sq, rest_scale) = if n == 1 {
        let w = u(p, q);
        // one variable X_q/X_p carries the whole Laurent structure
        let uni = LaurentPoly::from_terms(&ring, &["w"], w.terms().map(|(e, c)| (vec![e[q]], c.clone())));
        let dec = laurent_unit_decompose(&uni)?;
        if dec.shift != 0 {
            return Err(Error::NotACocycle("degree was not fully stripped".into()));
        }
        let back = |x: &LaurentPoly| {
            LaurentPoly::from_terms(
                &ring,
                &w.vars().iter().map(String::as_str).collect::<Vec<_>>(),
                x.terms().map(|(e, c)| {
                    let mut v = vec![0; 2];
                    v[q] = e[0];
                    v[p] = -e[0];
                    (v, c.clone())
                }),
            )
        };
        let one = w.one_like();
        let sp = inverse_one_plus_nil(&back(&dec.plus)).ok_or_else(|| Error::NotAUnit("plus part".into()))?;
        let sq = (&one + &back(&dec.minus)).scale(&dec.unit);
        (sp, sq, one)
    } else {
        eliminate(&u(p, q), p, q)?
    };
    let mut s = vec![sp.zero_like(); n + 1];
    s[p] = sp;
    s[q] = sq;
    for l in (0..=n).filter(|&l| l != p && l != q) {
        let sl = &u(p, l) * &rest_scale;
        if !Support::Chart(l).contains(&sl) {
            return Err(Error::NotACocycle(format!("u_{p}{l} does not descend to chart {l}")));
        }
        s[l] = sl;
    }
    let lambda = s[0].constant_term();
    let lambda_inv = ring
        .try_invert(&lambda)
        .ok_or_else(|| Error::NotAUnit("constant term of s_0 is not a unit".into()))?;
    let s: Vec<LaurentPoly> = s.iter().map(|x| x.scale(&lambda_inv)).collect();
    let norm = Normalization { degree, s };
    if !norm.verify(c) {
        return Err(Error::NotACocycle("normalization does not reconstruct the cocycle".into()));
    }
    Ok(norm)
}

/// Two-sided elimination on `w = u_pq` for `n >= 2`: returns `(s_p, s_q, alpha)`
/// where `alpha` is the unit of `T_p` that was multiplied in.
fn eliminate(w: &LaurentPoly, p: usize, q: usize) -> Result<(LaurentPoly, LaurentPoly, LaurentPoly)> {
    let ring = w.ring().clone();
    let bound = nil_ideal_bound(&ring, w.terms().filter(|(e, _)| e.iter().any(|&x| x != 0)).map(|(_, c)| c))
        .ok_or_else(|| Error::NotAUnit(format!("{w} has non-nilpotent non-constant coefficients")))?;
    let one = w.one_like();
    let mut w = w.clone();
    let mut alpha = one.clone();
    for _ in 0..=bound {
        let parts = graded_decompose(&w, p, q)?;
        if parts.x.is_zero() {
            break;
        }
        let ainv = ring.try_invert(&parts.constant).ok_or_else(|| Error::NotAUnit("constant term".into()))?;
        let factor = &one - &parts.x.scale(&ainv);
        alpha = &alpha * &factor;
        w = &w * &factor;
    }
    let mut beta = one.clone();
    for _ in 0..=bound {
        let parts = graded_decompose(&w, p, q)?;
        if parts.y.is_zero() {
            break;
        }
        let ainv = ring.try_invert(&parts.constant).ok_or_else(|| Error::NotAUnit("constant term".into()))?;
        let factor = &one - &parts.y.scale(&ainv);
        beta = &beta * &factor;
        w = &w * &factor;
    }
    let parts = graded_decompose(&w, p, q)?;
    if !parts.x.is_zero() || !parts.y.is_zero() {
        return Err(Error::NotAUnit("elimination did not terminate within the nilpotency bound".into()));
    }
    if !parts.z.is_zero() {
        return Err(Error::NotACocycle(format!("u_{p}{q} keeps mixed terms {}", parts.z)));
    }
    let beta_inv = unit_inverse(&beta).ok_or_else(|| Error::NotAUnit("elimination factor".into()))?;
    let sq = beta_inv.scale(&parts.constant);
    Ok((alpha.clone(), sq, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> Ring {
        Ring::zmod(4).unwrap()
    }

    fn twisting(n: usize, d: i64, ring: &Ring) -> CocycleData {
        let entries = (0..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        CocycleData::new(n, ring, entries.map(|(i, j)| ((i, j), ratio_power(ring, n, i, j, d)))).unwrap()
    }

    fn mono(ring: &Ring, n: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        let names = var_names(n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        LaurentPoly::from_terms(ring, &refs, terms.iter().map(|(e, c)| (e.to_vec(), ring.from_i64(*c))))
    }

    #[test]
    fn decomposition_examples() {
        let r = z4();
        let one = mono(&r, 1, &[(&[0, 0], 1)]);
        let d = graded_decompose(&one, 0, 1).unwrap();
        assert_eq!(d.constant, r.one());
        assert!(d.x.is_zero() && d.y.is_zero() && d.z.is_zero());
        let u = mono(&r, 1, &[(&[0, 0], 1), (&[-1, 1], 2)]);
        let d = graded_decompose(&u, 0, 1).unwrap();
        assert_eq!(d.x, mono(&r, 1, &[(&[-1, 1], 2)]));
        let u = mono(&r, 2, &[(&[-2, 1, 1], 1)]);
        let d = graded_decompose(&u, 0, 1).unwrap();
        assert_eq!(d.constant, r.zero());
        assert_eq!(d.x, u);
    }

    #[test]
    fn cocycle_checks() {
        let r = z4();
        assert!(check_cocycle(&twisting(1, 1, &r)).ok);
        assert!(check_cocycle(&twisting(2, 2, &r)).ok);
        let w = mono(&r, 1, &[(&[-1, 1], 1)]);
        let bad = CocycleData::new(1, &r, [((0, 1), w.clone()), ((1, 0), w)]).unwrap();
        let res = check_cocycle(&bad);
        assert!(!res.ok);
        assert!(res.violation.unwrap().contains("t_01 * t_10"));
    }

    #[test]
    fn degrees() {
        let r = z4();
        assert_eq!(cocycle_degree(&twisting(2, -3, &r)).unwrap(), -3);
        let t = mono(&r, 1, &[(&[-2, 2], 1), (&[-3, 3], 2)]);
        let c = CocycleData::new(1, &r, [((0, 1), t)]).unwrap();
        assert_eq!(cocycle_degree(&c).unwrap(), 2);
        assert_eq!(cocycle_degree(&twisting(3, 0, &r)).unwrap(), 0);
    }

    #[test]
    fn normalization_examples() {
        let r = z4();
        let norm = normalize_cocycle(&twisting(2, 3, &r)).unwrap();
        assert_eq!(norm.degree, 3);
        assert!(norm.is_trivial());

        // w^2 (1 + 2w), w = X1/X0
        let t = mono(&r, 1, &[(&[-2, 2], 1), (&[-3, 3], 2)]);
        let c = CocycleData::new(1, &r, [((0, 1), t)]).unwrap();
        let norm = normalize_cocycle(&c).unwrap();
        assert_eq!(norm.degree, 2);
        assert_eq!(norm.s[0], mono(&r, 1, &[(&[0, 0], 1), (&[-1, 1], 2)]));
        assert!(norm.s[1].is_one());

        // n = 2, sigma_0 = 1 + 2 X1/X0
        let sigma0 = mono(&r, 2, &[(&[0, 0, 0], 1), (&[-1, 1, 0], 2)]);
        let one = sigma0.one_like();
        let c = twisting(2, 1, &r).twist_by(&[sigma0.clone(), one.clone(), one]).unwrap();
        assert!(check_cocycle(&c).ok);
        let norm = normalize_cocycle(&c).unwrap();
        assert_eq!(norm.degree, 1);
        assert_eq!(norm.s[0], sigma0);
        assert!(norm.s[1].is_one() && norm.s[2].is_one());
        for (p, q) in [(1, 0), (2, 1), (0, 2)] {
            assert_eq!(normalize_cocycle_from(&c, p, q).unwrap(), norm);
        }
    }

    #[test]
    fn rejects_non_connected() {
        let r = Ring::zmod(6).unwrap();
        assert!(matches!(normalize_cocycle(&twisting(1, 1, &r)), Err(Error::NotConnected(_))));
    }
}
