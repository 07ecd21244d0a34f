//! Sparse multivariate Laurent polynomials over a [`Ring`].
//!
//! Ordinary and Laurent polynomials share one type; operations that need
//! non-negative exponents (division, homogeneity) check it. Terms are kept in
//! a `BTreeMap` keyed by exponent vectors, so iteration and serialization
//! follow the lexicographic order on exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    ring: Ring,
    vars: Arc<[String]>,
    terms: BTreeMap<Vec<i64>, Elem>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn var_list(vars: &[&str]) -> Arc<[String]> {
    vars.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

impl LaurentPoly {
    pub fn zero(ring: &Ring, vars: &[&str]) -> Self {
        Self { ring: ring.clone(), vars: var_list(vars), terms: BTreeMap::new() }
    }

    /// Zero in the same ring and variables as `self`.
    pub fn zero_like(&self) -> Self {
        Self { ring: self.ring.clone(), vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(self.ring.one())
    }

    pub fn constant_like(&self, c: Elem) -> Self {
        self.monomial_like(vec![0; self.nvars()], c)
    }

    pub fn monomial_like(&self, exp: Vec<i64>, c: Elem) -> Self {
        assert_eq!(exp.len(), self.nvars());
        let mut p = self.zero_like();
        if !self.ring.is_zero(&c) {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The `i`-th variable.
    pub fn var_like(&self, i: usize) -> Self {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.monomial_like(e, self.ring.one())
    }

    pub fn from_terms(ring: &Ring, vars: &[&str], terms: impl IntoIterator<Item = (Vec<i64>, Elem)>) -> Self {
        let mut p = Self::zero(ring, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length");
            p.add_term(e, &c);
        }
        p
    }

    /// Univariate polynomial in `X` from little-endian small-integer coefficients.
    pub fn from_i64s(ring: &Ring, coeffs: &[i64]) -> Self {
        Self::from_terms(
            ring,
            &["X"],
            coeffs.iter().enumerate().map(|(k, &c)| (vec![k as i64], ring.from_i64(c))),
        )
    }

    /// Univariate Laurent polynomial from `(exponent, coefficient)` pairs.
    pub fn laurent(ring: &Ring, terms: &[(i64, i64)]) -> Self {
        Self::from_terms(ring, &["X"], terms.iter().map(|&(e, c)| (vec![e], ring.from_i64(c))))
    }

    /// Same terms, re-labelled with new variable names.
    pub fn with_vars(mut self, vars: &[&str]) -> Self {
        assert_eq!(vars.len(), self.nvars());
        self.vars = var_list(vars);
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Elem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| e.iter().all(|&x| x == 0) && self.ring.is_one(c))
    }

    pub fn coeff(&self, exp: &[i64]) -> Elem {
        self.terms.get(exp).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Coefficient of `X^k` for a univariate polynomial.
    pub fn coeff_at(&self, k: i64) -> Elem {
        self.coeff(&[k])
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(&vec![0; self.nvars()])
    }

    fn add_term(&mut self, e: Vec<i64>, c: &Elem) {
        if self.ring.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = self.ring.add(x, c);
                if self.ring.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn compatible(&self, other: &Self) {
        assert!(self.ring == other.ring, "ring mismatch: {:?} vs {:?}", self.ring, other.ring);
        assert_eq!(self.nvars(), other.nvars(), "variable count mismatch");
    }

    pub fn scale(&self, c: &Elem) -> Self {
        let mut out = self.zero_like();
        for (e, x) in &self.terms {
            out.add_term(e.clone(), &self.ring.mul(x, c));
        }
        out
    }

    /// Multiplication by `c * X^exp`.
    pub fn mul_monomial(&self, exp: &[i64], c: &Elem) -> Self {
        let mut out = self.zero_like();
        for (e, x) in &self.terms {
            let ne: Vec<i64> = e.iter().zip(exp).map(|(a, b)| a + b).collect();
            out.add_term(ne, &self.ring.mul(x, c));
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = self.one_like();
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    pub fn map_coeffs(&self, f: impl Fn(&Elem) -> Elem) -> Self {
        let mut out = self.zero_like();
        for (e, x) in &self.terms {
            out.add_term(e.clone(), &f(x));
        }
        out
    }

    /// Keeps the terms whose exponent satisfies `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&[i64]) -> bool) -> Self {
        let mut out = self.zero_like();
        for (e, x) in &self.terms {
            if pred(e) {
                out.terms.insert(e.clone(), x.clone());
            }
        }
        out
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Highest exponent of a univariate polynomial (`None` for zero).
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().map(|e| e[0])
    }

    /// Lowest exponent of a univariate polynomial (`None` for zero).
    pub fn low_degree(&self) -> Option<i64> {
        self.terms.keys().next().map(|e| e[0])
    }

    /// Leading coefficient of a univariate polynomial.
    pub fn leading_coeff(&self) -> Elem {
        self.terms.values().next_back().cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.ring.is_one(&self.leading_coeff())
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Evaluates at a point; negative exponents need invertible coordinates.
    pub fn eval(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.nvars() {
            return Err(Error::Precondition(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let r = &self.ring;
        let mut acc = r.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                let base = if k < 0 {
                    r.try_invert(x)
                        .ok_or_else(|| Error::NotAUnit(format!("{} at a negative exponent", r.show(x))))?
                } else {
                    x.clone()
                };
                t = r.mul(&t, &r.pow(&base, k.unsigned_abs()));
            }
            acc = r.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitutes each variable by a Laurent polynomial (all in one common ring).
    pub fn substitute(&self, images: &[LaurentPoly]) -> Result<LaurentPoly> {
        if images.len() != self.nvars() {
            return Err(Error::Precondition("substitution needs one image per variable".into()));
        }
        let proto = images
            .first()
            .ok_or_else(|| Error::Precondition("substitution into a constant-only ring".into()))?;
        let mut inverses: Vec<Option<LaurentPoly>> = vec![None; images.len()];
        let mut acc = proto.zero_like();
        for (e, c) in &self.terms {
            let mut t = proto.constant_like(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let base = if k < 0 {
                    if inverses[i].is_none() {
                        inverses[i] = Some(unit_inverse(&images[i]).ok_or_else(|| {
                            Error::NotAUnit(format!("image {} raised to a negative power", images[i]))
                        })?);
                    }
                    inverses[i].clone().unwrap()
                } else {
                    images[i].clone()
                };
                t = &t * &base.pow(k.unsigned_abs());
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    pub(crate) fn require_univariate_poly(&self, what: &str) -> Result<()> {
        if self.nvars() != 1 {
            return Err(Error::Precondition(format!("{what} needs a univariate polynomial")));
        }
        if !self.is_polynomial() {
            return Err(Error::Precondition(format!("{what} needs non-negative exponents")));
        }
        Ok(())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mut mono = Vec::new();
            for (v, &k) in self.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => mono.push(v.clone()),
                    _ => mono.push(format!("{v}^{k}")),
                }
            }
            let mono = mono.join("*");
            let mut coef = self.ring.show(c);
            if coef.contains(['+']) || coef[1..].contains('-') {
                coef = format!("({coef})");
            }
            let term = if mono.is_empty() {
                coef
            } else if self.ring.is_one(c) {
                mono
            } else if coef == "-1" {
                format!("-{mono}")
            } else {
                format!("{coef}*{mono}")
            };
            if !first && !term.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{term}")?;
            first = false;
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.map_coeffs(|c| self.ring.neg(c))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.compatible(rhs);
        let mut out = self.zero_like();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &self.ring.mul(c1, c2));
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

// ---- nilpotent-coefficient machinery -------------------------------------------

/// Vanishing bound `1 + sum(e_i - 1)` for the ideal generated by `coeffs`,
/// `None` if some coefficient is not nilpotent.
pub fn nil_ideal_bound<'a>(ring: &Ring, coeffs: impl IntoIterator<Item = &'a Elem>) -> Option<u64> {
    let mut k = 1;
    for c in coeffs {
        k += ring.nilpotent_order(c)? - 1;
    }
    Some(k)
}

/// Inverse of `1 + m` when every coefficient of `m` is nilpotent, as a finite geometric series.
pub fn inverse_one_plus_nil(m: &LaurentPoly) -> Option<LaurentPoly> {
    let k = nil_ideal_bound(m.ring(), m.terms().map(|(_, c)| c))?;
    let neg = -m;
    let mut acc = m.one_like();
    let mut power = m.one_like();
    for _ in 1..k {
        power = &power * &neg;
        if power.is_zero() {
            break;
        }
        acc = &acc + &power;
    }
    debug_assert!((&(&m.one_like() + m) * &acc).is_one());
    Some(acc)
}

/// Inverse of a Laurent polynomial with exactly one unit coefficient and all
/// others nilpotent; over a connected ring these are all the units.
pub fn unit_inverse(p: &LaurentPoly) -> Option<LaurentPoly> {
    let ring = p.ring();
    let mut unit: Option<(&Vec<i64>, Elem)> = None;
    for (e, c) in p.terms() {
        if let Some(inv) = ring.try_invert(c) {
            if unit.is_some() {
                return None;
            }
            unit = Some((e, inv));
        } else if !ring.is_nilpotent(c) {
            return None;
        }
    }
    let (e0, uinv) = unit?;
    let shift: Vec<i64> = e0.iter().map(|x| -x).collect();
    let normalized = p.mul_monomial(&shift, &uinv);
    let rest = &normalized - &p.one_like();
    let inv = inverse_one_plus_nil(&rest)?;
    Some(inv.mul_monomial(&shift, &uinv))
}

// ---- univariate operations ----------------------------------------------------------

/// Division by a monic polynomial: returns `(q, r)` with `f = q*g + r`, `deg r < deg g`.
pub fn monic_divide(f: &LaurentPoly, g: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
    f.require_univariate_poly("monic division")?;
    g.require_univariate_poly("monic division")?;
    if f.ring() != g.ring() {
        return Err(Error::RingMismatch("dividend and divisor live in different rings".into()));
    }
    if !g.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = g.degree().unwrap();
    let mut q = f.zero_like();
    let mut r = f.clone();
    while let Some(top) = r.degree() {
        if top < d {
            break;
        }
        let c = r.leading_coeff();
        let shift = [top - d];
        q.add_term(shift.to_vec(), &c);
        r = &r - &g.mul_monomial(&shift, &c);
        debug_assert!(r.degree().map_or(true, |t| t < top));
    }
    Ok((q, r))
}

/// Unit test in `A[X]`: a polynomial is a unit iff its constant term is a unit
/// and all other coefficients are nilpotent. Returns the inverse.
pub fn is_unit_poly(p: &LaurentPoly) -> Result<Option<LaurentPoly>> {
    p.require_univariate_poly("unit test")?;
    let ring = p.ring();
    let Some(a0inv) = ring.try_invert(&p.constant_term()) else {
        return Ok(None);
    };
    let rest = p.filter_terms(|e| e[0] != 0).scale(&a0inv);
    let Some(inv) = inverse_one_plus_nil(&rest) else {
        return Ok(None);
    };
    let inv = inv.scale(&a0inv);
    debug_assert!((p * &inv).is_one());
    Ok(Some(inv))
}

/// Nilpotency order in `A[X]`: nilpotent iff every coefficient is.
pub fn is_nilpotent_poly(p: &LaurentPoly) -> Result<Option<u64>> {
    p.require_univariate_poly("nilpotency test")?;
    let Some(bound) = nil_ideal_bound(p.ring(), p.terms().map(|(_, c)| c)) else {
        return Ok(None);
    };
    let mut power = p.clone();
    for e in 1..=bound {
        if power.is_zero() {
            return Ok(Some(e));
        }
        power = &power * p;
    }
    Err(Error::Precondition(format!("nilpotency bound {bound} exceeded for {p}")))
}

// ---- homogeneity ---------------------------------------------------------------------

pub fn homogeneous_components(p: &LaurentPoly) -> Result<BTreeMap<i64, LaurentPoly>> {
    if !p.is_polynomial() {
        return Err(Error::Precondition("homogeneous components need non-negative exponents".into()));
    }
    let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for (e, c) in p.terms() {
        let d: i64 = e.iter().sum();
        out.entry(d).or_insert_with(|| p.zero_like()).add_term(e.clone(), c);
    }
    Ok(out)
}

pub fn is_homogeneous_of_degree(p: &LaurentPoly, d: i64) -> bool {
    p.terms().all(|(e, _)| e.iter().sum::<i64>() == d)
}

/// Checks `p(l*x) = l^d * p(x)` as a polynomial identity with a fresh variable `l`.
pub fn verify_scaling_identity(p: &LaurentPoly, d: i64) -> bool {
    let n = p.nvars();
    let mut names: Vec<String> = p.vars().to_vec();
    let mut fresh = String::from("lambda");
    while names.contains(&fresh) {
        fresh.push('_');
    }
    names.push(fresh);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let lifted = LaurentPoly::from_terms(
        p.ring(),
        &refs,
        p.terms().map(|(e, c)| {
            let mut e = e.clone();
            e.push(0);
            (e, c.clone())
        }),
    );
    let lambda = lifted.var_like(n);
    let images: Vec<LaurentPoly> = (0..n).map(|i| &lambda * &lifted.var_like(i)).collect();
    let mut images_full = images;
    images_full.push(lambda.clone());
    let Ok(lhs) = lifted.substitute(&images_full) else {
        return false;
    };
    let mut scale = vec![0; n + 1];
    scale[n] = d;
    let rhs = lifted.mul_monomial(&scale, &p.ring().one());
    lhs == rhs
}

// ---- Laurent unit decomposition ----------------------------------------------------

/// `p = unit * X^shift * (1 + plus) * (1 + minus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub shift: i64,
    pub unit: Elem,
    /// Positive exponents only, nilpotent coefficients.
    pub plus: LaurentPoly,
    /// Negative exponents only, nilpotent coefficients.
    pub minus: LaurentPoly,
}

impl UnitDecomposition {
    pub fn reconstruct(&self) -> LaurentPoly {
        let one = self.plus.one_like();
        let a = &one + &self.plus;
        let b = &one + &self.minus;
        (&a * &b).mul_monomial(&[self.shift], &self.unit)
    }

    /// Checks the structural invariants and the reconstruction identity against `p`.
    pub fn verify(&self, p: &LaurentPoly) -> bool {
        let ring = p.ring();
        ring.is_unit(&self.unit)
            && self.plus.terms().all(|(e, c)| e[0] > 0 && ring.is_nilpotent(c))
            && self.minus.terms().all(|(e, c)| e[0] < 0 && ring.is_nilpotent(c))
            && self.reconstruct() == *p
    }
}

fn require_connected(ring: &Ring) -> Result<()> {
    match ring.is_connected() {
        Ok(false) => Err(Error::NotConnected(format!("{} has non-trivial idempotents", ring.describe()))),
        // undecidable rings are validated lazily by the coefficient scan
        _ => Ok(()),
    }
}

/// Unique decomposition of a unit of `A[X, 1/X]` over a connected ring.
///
/// The single unit coefficient fixes `shift` and `unit`; the remaining part
/// `1 + n` (nilpotent `n`) is split by repeatedly multiplying with the inverse
/// of its non-positive part, which pushes the negative coefficients into ever
/// higher powers of the nil ideal until they vanish.
pub fn laurent_unit_decompose(p: &LaurentPoly) -> Result<UnitDecomposition> {
    if p.nvars() != 1 {
        return Err(Error::Precondition("Laurent decomposition needs one variable".into()));
    }
    let ring = p.ring();
    require_connected(ring)?;
    if p.is_zero() {
        return Err(Error::NotAUnit("zero polynomial".into()));
    }
    let mut unit: Option<(i64, Elem)> = None;
    for (e, c) in p.terms() {
        if ring.is_unit(c) {
            if let Some((l, _)) = &unit {
                return Err(Error::NotAUnit(format!(
                    "unit coefficients at X^{l} and X^{}",
                    e[0]
                )));
            }
            unit = Some((e[0], c.clone()));
        } else if !ring.is_nilpotent(c) {
            return Err(Error::NotAUnit(format!(
                "coefficient {} of X^{} is neither a unit nor nilpotent",
                ring.show(c),
                e[0]
            )));
        }
    }
    let (shift, u) = unit.ok_or_else(|| Error::NotAUnit("no unit coefficient".into()))?;
    let uinv = ring.try_invert(&u).unwrap();
    let mut q = p.mul_monomial(&[-shift], &uinv);
    let bound = nil_ideal_bound(ring, q.terms().filter(|(e, _)| e[0] != 0).map(|(_, c)| c)).unwrap();

    let one = q.one_like();
    let mut minus_factor = one.clone();
    for _ in 0..bound {
        let neg = q.filter_terms(|e| e[0] < 0);
        if neg.is_zero() {
            break;
        }
        let c0inv = ring
            .try_invert(&q.constant_term())
            .ok_or_else(|| Error::NotAUnit("constant term lost invertibility".into()))?;
        let nil = neg.scale(&c0inv);
        let inv = inverse_one_plus_nil(&nil).unwrap();
        q = &q * &inv;
        minus_factor = &minus_factor * &(&one + &nil);
    }
    if q.terms().any(|(e, _)| e[0] < 0) {
        return Err(Error::NotAUnit("negative part did not vanish within the nilpotency bound".into()));
    }
    let w = q.constant_term();
    let winv = ring.try_invert(&w).ok_or_else(|| Error::NotAUnit("constant term is not a unit".into()))?;
    let plus = &q.scale(&winv) - &one;
    let minus = &minus_factor - &one;
    let dec = UnitDecomposition { shift, unit: ring.mul(&u, &w), plus, minus };
    if !dec.verify(p) {
        return Err(Error::NotAUnit(format!("decomposition of {p} failed to reconstruct")));
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::zmod(n).unwrap()
    }

    fn p(r: &Ring, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_i64s(r, c)
    }

    #[test]
    fn monic_division_examples() {
        let r = z(4);
        let (q, rem) = monic_divide(&p(&r, &[2, 0, 1]), &p(&r, &[2, 1])).unwrap();
        assert_eq!(q, p(&r, &[2, 1]));
        assert_eq!(rem, p(&r, &[2]));
        let g = p(&r, &[1, 3, 1]);
        let (q, rem) = monic_divide(&g, &g).unwrap();
        assert!(q.is_one() && rem.is_zero());
        let (q, rem) = monic_divide(&p(&r, &[0, 1]), &p(&r, &[0, 0, 1])).unwrap();
        assert!(q.is_zero());
        assert_eq!(rem, p(&r, &[0, 1]));
        assert_eq!(monic_divide(&p(&r, &[0, 1]), &p(&r, &[0, 2])), Err(Error::NotMonic));
    }

    #[test]
    fn unit_poly_examples() {
        let r = z(4);
        assert_eq!(is_unit_poly(&p(&r, &[1, 2])).unwrap(), Some(p(&r, &[1, 2])));
        assert_eq!(is_unit_poly(&p(&r, &[3])).unwrap(), Some(p(&r, &[3])));
        assert_eq!(is_unit_poly(&p(&r, &[1, 1])).unwrap(), None);
    }

    #[test]
    fn nilpotent_poly_examples() {
        assert_eq!(is_nilpotent_poly(&p(&z(4), &[2, 2])).unwrap(), Some(2));
        assert_eq!(is_nilpotent_poly(&p(&z(8), &[0, 2])).unwrap(), Some(3));
        assert_eq!(is_nilpotent_poly(&p(&z(4), &[1])).unwrap(), None);
        assert_eq!(is_nilpotent_poly(&p(&z(4), &[])).unwrap(), Some(1));
    }

    #[test]
    fn homogeneity() {
        let r = Ring::integers();
        let vars = ["X0", "X1"];
        let f = LaurentPoly::from_terms(&r, &vars, [(vec![2, 0], r.one()), (vec![1, 1], r.one())]);
        let comps = homogeneous_components(&f).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[&2], f);
        assert!(is_homogeneous_of_degree(&f, 2));
        let g = LaurentPoly::from_terms(&r, &vars, [(vec![1, 0], r.one()), (vec![0, 2], r.one())]);
        let comps = homogeneous_components(&g).unwrap();
        assert_eq!(comps.keys().copied().collect::<Vec<_>>(), [1, 2]);
        assert!(!is_homogeneous_of_degree(&g, 1));
        let h = LaurentPoly::from_terms(&r, &vars, [(vec![1, 1], r.one())]);
        assert!(verify_scaling_identity(&h, 2));
        assert!(!verify_scaling_identity(&h, 1));
        assert!(!verify_scaling_identity(&g, 2));
    }

    #[test]
    fn decomposition_examples() {
        let r = z(4);
        let d = laurent_unit_decompose(&LaurentPoly::laurent(&r, &[(-2, 3)])).unwrap();
        assert_eq!((d.shift, d.unit.clone()), (-2, r.from_i64(3)));
        assert!(d.plus.is_zero() && d.minus.is_zero());

        let d = laurent_unit_decompose(&p(&r, &[2, 3, 2])).unwrap();
        assert_eq!(d.shift, 1);
        assert_eq!(d.unit, r.from_i64(3));
        assert_eq!(d.plus, LaurentPoly::laurent(&r, &[(1, 2)]));
        assert_eq!(d.minus, LaurentPoly::laurent(&r, &[(-1, 2)]));

        assert!(matches!(laurent_unit_decompose(&p(&r, &[1, 1])), Err(Error::NotAUnit(_))));
        assert!(matches!(laurent_unit_decompose(&p(&z(6), &[4, 3])), Err(Error::NotConnected(_))));
        assert!(matches!(laurent_unit_decompose(&p(&r, &[])), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn decomposition_needs_several_rounds() {
        // Z/8: u = X^-1 (1 + 2X)(1 + 2X^-1 + 4X^-2); the inverse of the negative
        // part only cancels it to first order, so the loop must iterate.
        let r = z(8);
        let a = LaurentPoly::laurent(&r, &[(0, 1), (1, 2)]);
        let b = LaurentPoly::laurent(&r, &[(0, 1), (-1, 2), (-2, 4)]);
        let u = (&a * &b).mul_monomial(&[-1], &r.from_i64(5));
        let d = laurent_unit_decompose(&u).unwrap();
        assert_eq!(d.shift, -1);
        assert_eq!(d.unit, r.from_i64(5));
        assert_eq!(d.plus, LaurentPoly::laurent(&r, &[(1, 2)]));
        assert_eq!(d.minus, LaurentPoly::laurent(&r, &[(-1, 2), (-2, 4)]));
    }

    #[test]
    fn unit_inverse_multivariate() {
        let r = z(4);
        let vars = ["X0", "X1"];
        let t = LaurentPoly::from_terms(
            &r,
            &vars,
            [(vec![-2, 2], r.one()), (vec![-3, 3], r.from_i64(2))],
        );
        let inv = unit_inverse(&t).unwrap();
        assert!((&t * &inv).is_one());
        let not_unit = LaurentPoly::from_terms(&r, &vars, [(vec![0, 0], r.one()), (vec![-1, 1], r.one())]);
        assert!(unit_inverse(&not_unit).is_none());
    }

    #[test]
    fn display_is_readable() {
        let r = z(4);
        assert_eq!(p(&r, &[2, 3, 2]).to_string(), "2+3*X+2*X^2");
        assert_eq!(LaurentPoly::laurent(&r, &[(-2, 3)]).to_string(), "3*X^-2");
        let k = Ring::quotient(&Ring::integers(), "x", &[5, 0, 1]).unwrap();
        let c = k.add(&k.one(), &k.generator().unwrap());
        let q = LaurentPoly::zero(&k, &["X"]).monomial_like(vec![1], c);
        assert_eq!(q.to_string(), "(1+x)*X");
    }
}
