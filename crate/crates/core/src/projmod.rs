//! Rank-one projective modules presented by idempotent matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{exact_divide, ideal_index, ideal_membership};
use crate::matrix::RingMatrix;
use crate::ring::{Elem, Ring, RingSpec};

/// Outcome of the minor test on `I - P`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneCheck {
    pub ok: bool,
    /// Coefficients `c_ij` with `sum c_ij (I-P)_ij = 1`, row-major, when they exist.
    pub unit_witness: Option<Vec<Elem>>,
    pub minors_vanish: bool,
}

/// Rank one of the complement of `P`: the entries of `I - P` generate the unit
/// ideal and all 2x2 minors of `I - P` vanish.
pub fn minor_ideal_rank_one_check(p: &RingMatrix) -> Result<RankOneCheck> {
    if !p.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    let e = RingMatrix::identity(p.rows(), p.zero_entry()).sub(p)?;
    Ok(rank_one_of(&e))
}

fn rank_one_of(e: &RingMatrix) -> RankOneCheck {
    let ring = e.ring();
    let gens: Vec<Elem> = e.entries().map(|v| v.elem.clone()).collect();
    let unit_witness = ideal_membership(ring, &gens, &ring.one());
    let minors_vanish = e.two_by_two_minors().iter().all(|m| m.is_zero());
    RankOneCheck { ok: unit_witness.is_some() && minors_vanish, unit_witness, minors_vanish }
}

/// `P Q P = P` and `Q P Q = Q`.
pub fn verify_pq(p: &RingMatrix, q: &RingMatrix) -> Result<bool> {
    if p.rows() != q.cols() || p.cols() != q.rows() {
        return Err(Error::InvalidInput("P and Q have incompatible shapes".into()));
    }
    let pqp = p.mul(q)?.mul(p)?;
    let qpq = q.mul(p)?.mul(q)?;
    Ok(pqp == *p && qpq == *q)
}

fn divide_matrix(m: &RingMatrix, d: &Elem) -> Result<RingMatrix> {
    let ring = m.ring().clone();
    let rows = m
        .to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|v| exact_divide(&ring, &v.elem, d).map(|x| ring.value(x))).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    RingMatrix::from_rows(rows, m.zero_entry())
}

fn require_square_pair(m: &RingMatrix, e: &RingMatrix) -> Result<()> {
    if !m.is_square() || m.rows() != e.rows() || !e.is_square() {
        return Err(Error::InvalidInput("conjugation needs square matrices of equal size".into()));
    }
    if m.ring() != e.ring() {
        return Err(Error::RingMismatch("matrices over different rings".into()));
    }
    if !e.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    Ok(())
}

/// `m^-1 E m`, computed as `adj(m) E m / det(m)` with exact division, so it is
/// defined whenever the quotient exists even if `m` is not invertible.
pub fn conjugate_idempotent(m: &RingMatrix, e: &RingMatrix) -> Result<RingMatrix> {
    require_square_pair(m, e)?;
    let d = m.det()?;
    let out = divide_matrix(&m.adjugate()?.mul(e)?.mul(m)?, &d.elem)?;
    debug_assert!(out.is_idempotent());
    Ok(out)
}

/// Inverse conjugation `m E adj(m) / det(m)`.
pub fn unconjugate_idempotent(m: &RingMatrix, e: &RingMatrix) -> Result<RingMatrix> {
    require_square_pair(m, e)?;
    let d = m.det()?;
    divide_matrix(&m.mul(e)?.mul(&m.adjugate()?)?, &d.elem)
}

// ---- principality in imaginary quadratic orders --------------------------------------

/// `d` for a ring `Z[x]/(x^2 + d)` with `d >= 1`.
pub fn quadratic_order_d(ring: &Ring) -> Option<BigInt> {
    let RingSpec::Quotient { base, modulus, .. } = ring.spec() else { return None };
    if **base != RingSpec::Integers || modulus.len() != 3 {
        return None;
    }
    match (&modulus[0], &modulus[1]) {
        (Elem::Int(d), Elem::Int(b)) if b.is_zero() && d.is_positive() => Some(d.clone()),
        _ => None,
    }
}

/// Record of a norm-equation search `u^2 + d v^2 = ideal_norm` with `|u| <= u_bound`, `|v| <= v_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormSearch {
    pub ideal_norm: BigInt,
    pub d: BigInt,
    pub u_bound: BigInt,
    pub v_bound: BigInt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Principality {
    /// `g` with `(g) = (gens)`, if one exists.
    pub generator: Option<Elem>,
    /// `gens_i = cofactors_i * g`.
    pub cofactors: Vec<Elem>,
    /// `g = sum combination_i * gens_i`.
    pub combination: Vec<Elem>,
    pub search: NormSearch,
}

impl NormSearch {
    /// All `(u, v)` with `u, v >= 0` solving the norm equation, in search order.
    pub fn solutions(&self) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::new();
        let mut v = BigInt::zero();
        while v <= self.v_bound {
            let rest = &self.ideal_norm - &self.d * &v * &v;
            if !rest.is_negative() {
                let u = rest.sqrt();
                if &u * &u == rest {
                    out.push((u, v.clone()));
                }
            }
            v += 1;
        }
        out
    }
}

/// Decides whether the ideal generated by `gens` in `Z[x]/(x^2 + d)` is
/// principal: a generator must have norm equal to the index of the ideal.
pub fn ideal_norm_principality(ring: &Ring, gens: &[Elem]) -> Result<Principality> {
    let d = quadratic_order_d(ring).ok_or_else(|| {
        Error::Unsupported(format!("{} is not an order Z[x]/(x^2+d) with d >= 1", ring.describe()))
    })?;
    if gens.iter().all(|g| ring.is_zero(g)) {
        return Err(Error::ZeroIdeal);
    }
    let index = ideal_index(ring, gens)?.ok_or(Error::ZeroIdeal)?;
    let search = NormSearch {
        u_bound: index.sqrt(),
        v_bound: (&index / &d).sqrt(),
        ideal_norm: index,
        d,
    };
    for (u, v) in search.solutions() {
        for sign in [1, -1] {
            let g = ring.from_coeffs(&[Elem::Int(u.clone()), Elem::Int(&v * sign)])?;
            let Some(combination) = ideal_membership(ring, gens, &g) else { continue };
            let cofactors: Option<Vec<Elem>> = gens.iter().map(|a| exact_divide(ring, a, &g).ok()).collect();
            if let Some(cofactors) = cofactors {
                return Ok(Principality { generator: Some(g), cofactors, combination, search });
            }
        }
    }
    Ok(Principality { generator: None, cofactors: Vec::new(), combination: Vec::new(), search })
}

// ---- freeness ------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum NonFreeCertificate {
    /// The ideal generated by row `row` is not principal.
    Norm { row: usize, search: NormSearch },
    /// No splitting among `searched` candidates.
    Exhaustion { searched: u128 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum FreenessResult {
    /// `x y = E` and `y x = 1`.
    Split { x: Vec<Elem>, y: Vec<Elem> },
    NonFree(NonFreeCertificate),
}

pub fn verify_split(e: &RingMatrix, x: &[Elem], y: &[Elem]) -> bool {
    let ring = e.ring();
    let n = e.rows();
    if x.len() != n || y.len() != e.cols() {
        return false;
    }
    let yx = x.iter().zip(y).fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)));
    ring.is_one(&yx) && (0..n).all(|i| (0..e.cols()).all(|j| ring.mul(&x[i], &y[j]) == e.get(i, j).elem))
}

/// Writes a rank-one idempotent `E` as `x y` with `y x = 1`, or certifies
/// that its image is not free.
pub fn rank_one_split(e: &RingMatrix, cap: u128) -> Result<FreenessResult> {
    if !e.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    let check = rank_one_of(e);
    if !check.ok {
        return Err(Error::RankNotOne(if check.minors_vanish {
            "entries do not generate the unit ideal".into()
        } else {
            "a 2x2 minor does not vanish".into()
        }));
    }
    let ring = e.ring().clone();
    if let Some((x, y)) = split_at_unit(e, &ring.one()) {
        return Ok(FreenessResult::Split { x, y });
    }
    if ring.is_finite() {
        if let Some((x, y)) = split_by_idempotents(e)? {
            return Ok(FreenessResult::Split { x, y });
        }
        return exhaustive_split(e, cap);
    }
    if *ring.spec() == RingSpec::Integers || quadratic_order_d(&ring).is_some() {
        return split_by_row_ideal(e);
    }
    Err(Error::Unsupported(format!("freeness over {} is not decided", ring.describe())))
}

/// Pivot on an entry that is a unit in the factor `e` (or the whole ring for `e = 1`).
fn split_at_unit(m: &RingMatrix, idem: &Elem) -> Option<(Vec<Elem>, Vec<Elem>)> {
    let ring = m.ring();
    let complement = ring.sub(&ring.one(), idem);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = ring.mul(&m.get(r, c).elem, idem);
            let Some(inv) = ring.try_invert(&ring.add(&v, &complement)) else { continue };
            let inv = ring.mul(&inv, idem);
            let x: Vec<Elem> = (0..m.rows()).map(|i| ring.mul(&m.get(i, c).elem, &inv)).collect();
            let y: Vec<Elem> = (0..m.cols()).map(|j| ring.mul(&m.get(r, j).elem, idem)).collect();
            return Some((x, y));
        }
    }
    None
}

fn split_by_idempotents(e: &RingMatrix) -> Result<Option<(Vec<Elem>, Vec<Elem>)>> {
    let ring = e.ring().clone();
    let mut x = vec![ring.zero(); e.rows()];
    let mut y = vec![ring.zero(); e.cols()];
    for idem in ring.primitive_idempotents()? {
        let Some((xk, yk)) = split_at_unit(e, &idem) else { return Ok(None) };
        x = x.iter().zip(&xk).map(|(a, b)| ring.add(a, b)).collect();
        y = y.iter().zip(&yk).map(|(a, b)| ring.add(a, b)).collect();
    }
    Ok(verify_split(e, &x, &y).then_some((x, y)))
}

fn exhaustive_split(e: &RingMatrix, cap: u128) -> Result<FreenessResult> {
    let ring = e.ring().clone();
    let elems = ring.elements()?;
    let n = e.cols();
    let total = (elems.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::DomainTooLarge(format!("{total} candidate rows exceed the cap {cap}")));
    }
    let mut idx = vec![0usize; n];
    let mut searched = 0u128;
    loop {
        searched += 1;
        let y: Vec<Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
        if let Some(c) = ideal_membership(&ring, &y, &ring.one()) {
            let x: Vec<Elem> = (0..e.rows())
                .map(|i| (0..n).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&e.get(i, j).elem, &c[j]))))
                .collect();
            if verify_split(e, &x, &y) {
                return Ok(FreenessResult::Split { x, y });
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(FreenessResult::NonFree(NonFreeCertificate::Exhaustion { searched }));
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Over `Z` or an imaginary quadratic order: the image is free iff the ideal
/// of some non-zero row is principal, generated by `g`; then `y = row / g` and
/// `x = E c` for any `c` with `y c = 1`.
fn split_by_row_ideal(e: &RingMatrix) -> Result<FreenessResult> {
    let ring = e.ring().clone();
    let r = (0..e.rows())
        .find(|&r| e.row(r).iter().any(|v| !v.is_zero()))
        .ok_or_else(|| Error::RankNotOne("zero matrix".into()))?;
    let row: Vec<Elem> = e.row(r).into_iter().map(|v| v.elem).collect();
    let g = if *ring.spec() == RingSpec::Integers {
        let ints: Vec<BigInt> = row.iter().map(|x| match x {
            Elem::Int(v) => v.clone(),
            _ => unreachable!("integer payload"),
        }).collect();
        Elem::Int(ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v)))
    } else {
        let pr = ideal_norm_principality(&ring, &row)?;
        match pr.generator {
            Some(g) => g,
            None => return Ok(FreenessResult::NonFree(NonFreeCertificate::Norm { row: r, search: pr.search })),
        }
    };
    let y: Vec<Elem> = row.iter().map(|a| exact_divide(&ring, a, &g)).collect::<Result<_>>()?;
    let c = ideal_membership(&ring, &y, &ring.one())
        .ok_or_else(|| Error::RankNotOne("row quotient is not unimodular".into()))?;
    let x: Vec<Elem> = (0..e.rows())
        .map(|i| (0..e.cols()).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&e.get(i, j).elem, &c[j]))))
        .collect();
    if !verify_split(e, &x, &y) {
        return Err(Error::RankNotOne("row splitting does not re-multiply".into()));
    }
    Ok(FreenessResult::Split { x, y })
}

/// Replays a non-freeness certificate against `E`.
pub fn verify_nonfree(e: &RingMatrix, cert: &NonFreeCertificate) -> Result<bool> {
    match cert {
        NonFreeCertificate::Norm { row, search } => {
            if *row >= e.rows() {
                return Ok(false);
            }
            let gens: Vec<Elem> = e.row(*row).into_iter().map(|v| v.elem).collect();
            let again = ideal_norm_principality(e.ring(), &gens)?;
            Ok(again.generator.is_none() && again.search == *search)
        }
        NonFreeCertificate::Exhaustion { .. } => {
            Ok(matches!(exhaustive_split(e, u128::MAX)?, FreenessResult::NonFree(_)))
        }
    }
}

/// `u^2 + d v^2` for `u + v x` in `Z[x]/(x^2 + d)`.
pub fn norm_of(ring: &Ring, a: &Elem) -> Option<BigInt> {
    let d = quadratic_order_d(ring)?;
    let Elem::Poly(c) = a else { return None };
    let (Elem::Int(u), Elem::Int(v)) = (&c[0], &c[1]) else { return None };
    Some(u * u + d * v * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingValue;

    fn zsqrt5() -> Ring {
        Ring::quotient(&Ring::integers(), "x", &[5, 0, 1]).unwrap()
    }

    fn example(k: &Ring) -> (RingMatrix, RingMatrix) {
        let x = k.value(k.generator().unwrap());
        let one = k.value(k.one());
        let two = k.value(k.from_i64(2));
        let zero = k.value(k.zero());
        let m = RingMatrix::from_rows(vec![vec![&one + &x, -&two], vec![-&two, &one - &x]], &one).unwrap();
        let e = RingMatrix::from_rows(vec![vec![one.clone(), zero.clone()], vec![zero.clone(), zero]], &one).unwrap();
        (m, e)
    }

    fn lit(k: &Ring, a: i64, b: i64) -> RingValue {
        k.value(k.from_coeffs(&[Elem::Int(a.into()), Elem::Int(b.into())]).unwrap())
    }

    #[test]
    fn rank_one_checks() {
        let r = Ring::zmod(4).unwrap();
        let p = RingMatrix::from_i64(&r, &[&[0, 0], &[0, 1]]);
        assert!(minor_ideal_rank_one_check(&p).unwrap().ok);
        let z = RingMatrix::from_i64(&r, &[&[0, 0], &[0, 0]]);
        assert!(!minor_ideal_rank_one_check(&z).unwrap().ok);
        let bad = RingMatrix::from_i64(&r, &[&[2, 0], &[0, 0]]);
        assert_eq!(minor_ideal_rank_one_check(&bad), Err(Error::NotIdempotent));
    }

    #[test]
    fn pq_identities() {
        let r = Ring::zmod(4).unwrap();
        let p = RingMatrix::from_i64(&r, &[&[1, 2], &[0, 0]]);
        assert!(verify_pq(&p, &p).unwrap());
        let z = RingMatrix::from_i64(&r, &[&[0, 0], &[0, 0]]);
        assert!(!verify_pq(&p, &z).unwrap());
        assert!(verify_pq(&z, &z).unwrap());
    }

    #[test]
    fn locally_inner_example() {
        let k = zsqrt5();
        let (m, e) = example(&k);
        assert_eq!(m.det().unwrap(), k.value(k.from_i64(2)));
        let e2 = conjugate_idempotent(&m, &e).unwrap();
        let expected = RingMatrix::from_rows(
            vec![vec![lit(&k, 3, 0), lit(&k, -1, 1)], vec![lit(&k, 1, 1), lit(&k, -2, 0)]],
            e.zero_entry(),
        )
        .unwrap();
        assert_eq!(e2, expected);
        assert!(e2.is_idempotent());
        assert_eq!(e2.trace(), e.trace());
        assert_eq!(unconjugate_idempotent(&m, &e2).unwrap(), e);

        let id = RingMatrix::identity(2, e.zero_entry());
        let other = id.sub(&e).unwrap();
        assert_eq!(conjugate_idempotent(&m, &other).unwrap(), id.sub(&expected).unwrap());
        assert_eq!(conjugate_idempotent(&id, &e).unwrap(), e);

        assert!(minor_ideal_rank_one_check(&id.sub(&e2).unwrap()).unwrap().ok);
        match rank_one_split(&e2, 1000).unwrap() {
            FreenessResult::NonFree(cert) => {
                let NonFreeCertificate::Norm { search, .. } = &cert else { panic!("norm certificate") };
                assert_eq!(search.ideal_norm, BigInt::from(3));
                assert!(search.solutions().is_empty());
                assert!(verify_nonfree(&e2, &cert).unwrap());
            }
            other => panic!("expected NonFree, got {other:?}"),
        }
    }

    #[test]
    fn splits() {
        let r = Ring::zmod(4).unwrap();
        let e = RingMatrix::from_i64(&r, &[&[1, 2], &[0, 0]]);
        let FreenessResult::Split { x, y } = rank_one_split(&e, 1000).unwrap() else { panic!() };
        assert_eq!(x, vec![r.from_i64(1), r.from_i64(0)]);
        assert_eq!(y, vec![r.from_i64(1), r.from_i64(2)]);
        // Z/6 needs two local pivots
        let r6 = Ring::zmod(6).unwrap();
        let e = RingMatrix::from_i64(&r6, &[&[3, 0], &[0, 4]]);
        let FreenessResult::Split { x, y } = rank_one_split(&e, 1000).unwrap() else { panic!() };
        assert!(verify_split(&e, &x, &y));
        // over Z
        let zz = Ring::integers();
        let e = RingMatrix::from_i64(&zz, &[&[3, -6], &[1, -2]]);
        let FreenessResult::Split { x, y } = rank_one_split(&e, 1000).unwrap() else { panic!() };
        assert!(verify_split(&e, &x, &y));
        let p = RingMatrix::from_i64(&r, &[&[0, 0], &[0, 0]]);
        assert!(matches!(rank_one_split(&p, 1000), Err(Error::RankNotOne(_))));
    }

    #[test]
    fn principality_examples() {
        let k = zsqrt5();
        let pr = ideal_norm_principality(&k, &[k.from_i64(7), k.zero()]).unwrap();
        assert_eq!(pr.generator, Some(k.from_i64(7)));
        let one_x = lit(&k, 1, 1).elem;
        let pr = ideal_norm_principality(&k, &[k.from_i64(3), one_x.clone()]).unwrap();
        assert!(pr.generator.is_none());
        assert_eq!(pr.search.ideal_norm, BigInt::from(3));
        assert_eq!((pr.search.u_bound.clone(), pr.search.v_bound.clone()), (BigInt::from(1), BigInt::from(0)));
        let pr = ideal_norm_principality(&k, &[k.from_i64(2), one_x.clone()]).unwrap();
        assert!(pr.generator.is_none());
        assert_eq!(pr.search.ideal_norm, BigInt::from(2));
        // (3 + x) has norm 14
        let g = lit(&k, 3, 1).elem;
        let a = k.mul(&g, &k.from_i64(2));
        let b = k.mul(&g, &k.from_i64(3));
        let pr = ideal_norm_principality(&k, &[a, b]).unwrap();
        assert_eq!(norm_of(&k, &pr.generator.unwrap()), Some(BigInt::from(14)));
        assert_eq!(ideal_norm_principality(&k, &[k.zero()]), Err(Error::ZeroIdeal));
    }
}
