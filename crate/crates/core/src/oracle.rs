//! Brute-force engines over finite rings. Everything here enumerates; nothing
//! calls into the symbolic algorithms it is used to cross-check.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::RingMatrix;
use crate::poly::LaurentPoly;
use crate::projspace::{normalize_point, ProjPoint};
use crate::ring::{Elem, Ring};

pub const DEFAULT_CAP: u64 = 1_000_000;

/// Witness lists in reports are truncated to this length.
pub const MAX_WITNESSES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub ring: Ring,
    pub task: String,
    pub count: u64,
    pub witnesses: Vec<Vec<Elem>>,
    pub elapsed: Duration,
}

fn finite_elements(ring: &Ring) -> Result<Vec<Elem>> {
    if !ring.is_finite() {
        return Err(Error::RingNotFinite(ring.describe()));
    }
    ring.elements()
}

fn domain_size(base: usize, len: usize, cap: u64) -> Result<u64> {
    let total = (base as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::DomainTooLarge(format!("{total} evaluations exceed the cap of {cap}")));
    }
    Ok(total as u64)
}

/// The `index`-th tuple of length `len` in lexicographic order, first coordinate most significant.
pub fn tuple_at(elems: &[Elem], len: usize, mut index: u64) -> Vec<Elem> {
    let base = elems.len() as u64;
    let mut out = vec![elems[0].clone(); len];
    for slot in out.iter_mut().rev() {
        *slot = elems[(index % base) as usize].clone();
        index /= base;
    }
    out
}

/// Checks `pred` on every item of a domain of `size` items. Returns the first
/// counterexample in enumeration order, or `None` when the predicate holds everywhere.
pub fn exhaustive_check<T, G, P>(size: u64, item: G, pred: P, cap: u64) -> Result<Option<(u64, T)>>
where
    T: Send,
    G: Fn(u64) -> T + Sync,
    P: Fn(&T) -> bool + Sync,
{
    if size > cap {
        return Err(Error::DomainTooLarge(format!("{size} evaluations exceed the cap of {cap}")));
    }
    Ok((0..size).into_par_iter().map(|i| (i, item(i))).find_first(|(_, t)| !pred(t)))
}

/// Same as [`exhaustive_check`] over all `len`-tuples of ring elements.
pub fn exhaustive_check_tuples<P>(ring: &Ring, len: usize, pred: P, cap: u64) -> Result<Option<Vec<Elem>>>
where
    P: Fn(&[Elem]) -> bool + Sync,
{
    let elems = finite_elements(ring)?;
    let size = domain_size(elems.len(), len, cap)?;
    Ok(exhaustive_check(size, |i| tuple_at(&elems, len, i), |v| pred(v), cap)?.map(|(_, v)| v))
}

/// All canonical points of `P^n(ring)` in lexicographic order of their coordinates.
pub fn enumerate_points(n: usize, ring: &Ring) -> Result<Vec<ProjPoint>> {
    enumerate_points_capped(n, ring, DEFAULT_CAP)
}

pub fn enumerate_points_capped(n: usize, ring: &Ring, cap: u64) -> Result<Vec<ProjPoint>> {
    let elems = finite_elements(ring)?;
    crate::projspace::require_local(ring)?;
    let size = domain_size(elems.len(), n + 1, cap)?;
    let points: Vec<Option<ProjPoint>> = (0..size)
        .into_par_iter()
        .map(|i| {
            let v = tuple_at(&elems, n + 1, i);
            let first_unit = v.iter().find(|x| ring.is_unit(x))?;
            if !ring.is_one(first_unit) {
                return None;
            }
            normalize_point(ring, &v).ok()
        })
        .collect();
    Ok(points.into_iter().flatten().collect())
}

/// Scans every polynomial of degree at most `bound` for an inverse of `p`.
pub fn exhaustive_inverse_search(p: &LaurentPoly, bound: usize) -> Result<Option<LaurentPoly>> {
    exhaustive_inverse_search_capped(p, bound, DEFAULT_CAP)
}

pub fn exhaustive_inverse_search_capped(p: &LaurentPoly, bound: usize, cap: u64) -> Result<Option<LaurentPoly>> {
    p.require_univariate_poly("p")?;
    let ring = p.ring();
    let elems = finite_elements(ring)?;
    let size = domain_size(elems.len(), bound + 1, cap)?;
    let pc: Vec<Elem> = match p.degree() {
        None => return Ok(None),
        Some(d) => (0..=d).map(|k| p.coeff_at(k)).collect(),
    };
    let is_inverse = |q: &[Elem]| {
        // coefficients of p*q, lowest first, stopping at the first mismatch
        (0..pc.len() + q.len() - 1).all(|k| {
            let c = (0..=k)
                .filter(|&i| i < pc.len() && k - i < q.len())
                .fold(ring.zero(), |acc, i| ring.add(&acc, &ring.mul(&pc[i], &q[k - i])));
            if k == 0 {
                ring.is_one(&c)
            } else {
                ring.is_zero(&c)
            }
        })
    };
    // coefficient vectors are enumerated with the constant term most significant
    let found = (0..size).into_par_iter().find_first(|&i| is_inverse(&tuple_at(&elems, bound + 1, i)));
    Ok(found.map(|i| {
        let q = tuple_at(&elems, bound + 1, i);
        LaurentPoly::from_terms(ring, &["X"], q.into_iter().enumerate().map(|(k, c)| (vec![k as i64], c)))
            .with_vars(&p.vars().iter().map(String::as_str).collect::<Vec<_>>())
    }))
}

/// Smallest `k` with `p^k = 0` found by repeated multiplication up to `max_power`.
pub fn power_scan_nilpotent(p: &LaurentPoly, max_power: u64) -> Option<u64> {
    let mut acc = p.clone();
    for k in 1..=max_power {
        if acc.is_zero() {
            return Some(k);
        }
        acc = &acc * p;
    }
    None
}

/// All `m x m` matrices over a finite ring, rows read left to right, top to bottom.
pub fn all_matrices(ring: &Ring, m: usize, cap: u64) -> Result<Vec<RingMatrix>> {
    let elems = finite_elements(ring)?;
    let size = domain_size(elems.len(), m * m, cap)?;
    Ok((0..size)
        .map(|i| {
            let flat = tuple_at(&elems, m * m, i);
            let rows: Vec<Vec<Elem>> = flat.chunks(m).map(<[Elem]>::to_vec).collect();
            RingMatrix::from_elems(ring, rows).expect("square")
        })
        .collect())
}

// ---- named tasks for the command line -------------------------------------------------

fn report(ring: &Ring, task: &str, start: Instant, count: u64, mut witnesses: Vec<Vec<Elem>>) -> EnumerationReport {
    witnesses.truncate(MAX_WITNESSES);
    EnumerationReport { ring: ring.clone(), task: task.into(), count, witnesses, elapsed: start.elapsed() }
}

/// Points of `P^n`; the witnesses are the canonical coordinates.
pub fn points_report(n: usize, ring: &Ring, cap: u64) -> Result<EnumerationReport> {
    let start = Instant::now();
    let points = enumerate_points_capped(n, ring, cap)?;
    let w = points.iter().map(|p| p.coords().to_vec()).collect();
    Ok(report(ring, "points", start, points.len() as u64, w))
}

/// Units of the ring.
pub fn units_report(ring: &Ring, cap: u64) -> Result<EnumerationReport> {
    let start = Instant::now();
    let elems = finite_elements(ring)?;
    domain_size(elems.len(), 1, cap)?;
    let units: Vec<Vec<Elem>> = elems.into_iter().filter(|x| ring.is_unit(x)).map(|x| vec![x]).collect();
    Ok(report(ring, "units", start, units.len() as u64, units))
}

/// Pairs `(a, b)` violating `a + b unit => a unit or b unit`; count 0 means the ring is local.
pub fn locality_report(ring: &Ring, cap: u64) -> Result<EnumerationReport> {
    let start = Instant::now();
    let elems = finite_elements(ring)?;
    let size = domain_size(elems.len(), 2, cap)?;
    let bad: Vec<Vec<Elem>> = (0..size)
        .into_par_iter()
        .map(|i| tuple_at(&elems, 2, i))
        .filter(|v| ring.is_unit(&ring.add(&v[0], &v[1])) && !ring.is_unit(&v[0]) && !ring.is_unit(&v[1]))
        .collect();
    Ok(report(ring, "locality", start, bad.len() as u64, bad))
}

/// Inverse of `p` among polynomials of degree at most `bound`; count is 0 or 1.
pub fn inverse_report(p: &LaurentPoly, bound: usize, cap: u64) -> Result<EnumerationReport> {
    let start = Instant::now();
    let q = exhaustive_inverse_search_capped(p, bound, cap)?;
    let w: Vec<Vec<Elem>> = q
        .iter()
        .map(|q| (0..=q.degree().unwrap_or(0)).map(|k| q.coeff_at(k)).collect())
        .collect();
    Ok(report(p.ring(), "inverse", start, w.len() as u64, w))
}

/// `m x m` matrices on which the two sides of the GL criterion disagree.
pub fn gl_criterion_report(ring: &Ring, m: usize, cap: u64) -> Result<EnumerationReport> {
    let start = Instant::now();
    let mats = all_matrices(ring, m, cap)?;
    let sides: Vec<(bool, bool)> = mats.par_iter().map(crate::projspace::gl_iff_nonvanishing).collect::<Result<_>>()?;
    let bad: Vec<Vec<Elem>> = mats
        .iter()
        .zip(&sides)
        .filter(|(_, (l, r))| l != r)
        .map(|(a, _)| a.elems().concat())
        .collect();
    Ok(report(ring, "gl-criterion", start, bad.len() as u64, bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shows(pts: &[ProjPoint]) -> Vec<String> {
        pts.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn point_counts() {
        let f2 = Ring::zmod(2).unwrap();
        assert_eq!(shows(&enumerate_points(1, &f2).unwrap()), ["[0:1]", "[1:0]", "[1:1]"]);
        assert_eq!(enumerate_points(1, &Ring::zmod(4).unwrap()).unwrap().len(), 6);
        let f3 = Ring::zmod(3).unwrap();
        assert_eq!(shows(&enumerate_points(1, &f3).unwrap()), ["[0:1]", "[1:0]", "[1:1]", "[1:2]"]);
        assert_eq!(enumerate_points(2, &f2).unwrap().len(), 7);
        assert!(matches!(enumerate_points(1, &Ring::integers()), Err(Error::RingNotFinite(_))));
        assert!(matches!(enumerate_points(1, &Ring::zmod(6).unwrap()), Err(Error::NotLocal(_))));
    }

    #[test]
    fn inverse_search() {
        let r = Ring::zmod(4).unwrap();
        let p = LaurentPoly::from_i64s(&r, &[1, 2]);
        assert_eq!(exhaustive_inverse_search(&p, 3).unwrap(), Some(p.clone()));
        let x = LaurentPoly::from_i64s(&r, &[0, 1]);
        assert_eq!(exhaustive_inverse_search(&x, 6).unwrap(), None);
        let f2 = Ring::zmod(2).unwrap();
        let one = LaurentPoly::from_i64s(&f2, &[1]);
        assert_eq!(exhaustive_inverse_search(&one, 2).unwrap(), Some(one));
        assert!(matches!(exhaustive_inverse_search_capped(&p, 20, 1000), Err(Error::DomainTooLarge(_))));
    }

    #[test]
    fn quantifier_checks() {
        let f2 = Ring::zmod(2).unwrap();
        let mats: Vec<_> = all_matrices(&f2, 2, DEFAULT_CAP).unwrap().into_iter().filter(|m| m.det().unwrap().elem == f2.one()).collect();
        assert_eq!(mats.len(), 6);
        for m in &mats {
            let ok = exhaustive_check_tuples(&f2, 2, |v| {
                v.iter().all(|x| f2.is_zero(x)) || (0..2).any(|i| {
                    let s = f2.add(&f2.mul(&m.get(i, 0).elem, &v[0]), &f2.mul(&m.get(i, 1).elem, &v[1]));
                    !f2.is_zero(&s)
                })
            }, DEFAULT_CAP);
            assert_eq!(ok.unwrap(), None);
        }
        let z4 = Ring::zmod(4).unwrap();
        let all_units = exhaustive_check_tuples(&z4, 1, |v| z4.is_unit(&v[0]), DEFAULT_CAP).unwrap();
        assert_eq!(all_units, Some(vec![z4.zero()]));
        let z8 = Ring::zmod(8).unwrap();
        assert_eq!(locality_report(&z8, DEFAULT_CAP).unwrap().count, 0);
        assert!(locality_report(&Ring::zmod(6).unwrap(), DEFAULT_CAP).unwrap().count > 0);
        assert!(matches!(exhaustive_check_tuples(&z8, 8, |_| true, 1000), Err(Error::DomainTooLarge(_))));
    }

    #[test]
    fn nilpotent_scan() {
        let r = Ring::zmod(4).unwrap();
        assert_eq!(power_scan_nilpotent(&LaurentPoly::from_i64s(&r, &[2, 2]), 8), Some(2));
        assert_eq!(power_scan_nilpotent(&LaurentPoly::from_i64s(&r, &[1, 2]), 8), None);
    }
}
