//! Integer row-echelon (Hermite) forms and the ideal computations built on them.
//!
//! Every supported ring is a free module of finite rank over `Z` or `Z/n`
//! (see [`Ring::to_flat`]), so ideal membership, exact division and ideal
//! indices reduce to integer lattice problems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

/// Row-echelon form `H = U * A` with unimodular `U`.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

/// Hermite normal form of the row lattice of `a` (`rows x cols`), with transform.
pub fn hermite(a: &[Vec<BigInt>], cols: usize) -> Echelon {
    let m = a.len();
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for c in 0..cols {
        if prow == m {
            break;
        }
        loop {
            // smallest non-zero entry at or below the pivot row
            let best = (prow..m)
                .filter(|&r| !h[r][c].is_zero())
                .min_by(|&x, &y| h[x][c].abs().cmp(&h[y][c].abs()));
            let Some(best) = best else { break };
            h.swap(prow, best);
            u.swap(prow, best);
            let mut done = true;
            for r in prow + 1..m {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = h[r][c].div_floor(&h[prow][c]);
                row_axpy(&mut h, r, prow, &q);
                row_axpy(&mut u, r, prow, &q);
                if !h[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[prow][c].is_zero() {
            continue;
        }
        if h[prow][c].is_negative() {
            for x in h[prow].iter_mut() {
                *x = -&*x;
            }
            for x in u[prow].iter_mut() {
                *x = -&*x;
            }
        }
        for r in 0..prow {
            let q = h[r][c].div_floor(&h[prow][c]);
            if !q.is_zero() {
                row_axpy(&mut h, r, prow, &q);
                row_axpy(&mut u, r, prow, &q);
            }
        }
        pivots.push((prow, c));
        prow += 1;
    }
    Echelon { h, u, pivots }
}

/// `rows[r] -= q * rows[s]`
fn row_axpy(rows: &mut [Vec<BigInt>], r: usize, s: usize, q: &BigInt) {
    let src = rows[s].clone();
    for (x, y) in rows[r].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coefficients `l` with `sum l_i * a_i = target`, if the target lies in the lattice.
    pub fn solve(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut t = target.to_vec();
        let m = self.u.len();
        let mut combo = vec![BigInt::zero(); m];
        let mut next = 0;
        for c in 0..t.len() {
            if next < self.pivots.len() && self.pivots[next].1 == c {
                let (r, _) = self.pivots[next];
                let p = &self.h[r][c];
                if !(&t[c] % p).is_zero() {
                    return None;
                }
                let q = &t[c] / p;
                for (x, y) in t.iter_mut().zip(&self.h[r]) {
                    *x -= &q * y;
                }
                for (x, y) in combo.iter_mut().zip(&self.u[r]) {
                    *x += &q * y;
                }
                next += 1;
            } else if !t[c].is_zero() {
                return None;
            }
        }
        Some(combo)
    }

    /// Index of a full-rank lattice in `Z^cols` (product of the pivots).
    pub fn index(&self, cols: usize) -> Option<BigInt> {
        if self.rank() < cols {
            return None;
        }
        Some(self.pivots.iter().map(|&(r, c)| self.h[r][c].clone()).product())
    }
}

/// Lattice of the ideal generated by `gens`, one row per `g * b` with `b` a
/// flat basis element, plus `n * e_k` rows when the scalars are `Z/n`.
fn ideal_rows(ring: &Ring, gens: &[Elem]) -> (Vec<Vec<BigInt>>, usize) {
    let (modulus, rank) = ring.flat_shape();
    let basis = ring.flat_basis();
    let mut rows = Vec::new();
    for g in gens {
        for b in &basis {
            rows.push(ring.to_flat(&ring.mul(g, b)));
        }
    }
    if let Some(n) = modulus {
        for k in 0..rank {
            let mut v = vec![BigInt::zero(); rank];
            v[k] = BigInt::from(n);
            rows.push(v);
        }
    }
    (rows, rank)
}

/// Coefficients `c_i` with `sum c_i * gens_i = target`, if `target` is in the ideal.
pub fn ideal_membership(ring: &Ring, gens: &[Elem], target: &Elem) -> Option<Vec<Elem>> {
    let (rows, rank) = ideal_rows(ring, gens);
    if rows.is_empty() {
        return if ring.is_zero(target) { Some(Vec::new()) } else { None };
    }
    let ech = hermite(&rows, rank);
    let combo = ech.solve(&ring.to_flat(target))?;
    let basis = ring.flat_basis();
    let coeffs: Vec<Elem> = (0..gens.len())
        .map(|i| {
            let mut acc = ring.zero();
            for (t, b) in basis.iter().enumerate() {
                let l = &combo[i * rank + t];
                if !l.is_zero() {
                    acc = ring.add(&acc, &ring.mul(&ring.from_bigint(l), b));
                }
            }
            acc
        })
        .collect();
    let check = gens
        .iter()
        .zip(&coeffs)
        .fold(ring.zero(), |acc, (g, c)| ring.add(&acc, &ring.mul(g, c)));
    debug_assert_eq!(&check, target);
    (check == *target).then_some(coeffs)
}

/// Coefficients `a_k` in the ring with `sum a_k * gens_k = target`, where
/// `gens_k` and `target` are vectors of equal length over the ring.
pub fn solve_module(ring: &Ring, gens: &[Vec<Elem>], target: &[Elem]) -> Option<Vec<Elem>> {
    let (modulus, rank) = ring.flat_shape();
    let basis = ring.flat_basis();
    let width = target.len() * rank;
    let flatten = |v: &[Elem]| -> Vec<BigInt> { v.iter().flat_map(|x| ring.to_flat(x)).collect() };
    let mut rows = Vec::new();
    for g in gens {
        debug_assert_eq!(g.len(), target.len());
        for b in &basis {
            let scaled: Vec<Elem> = g.iter().map(|x| ring.mul(x, b)).collect();
            rows.push(flatten(&scaled));
        }
    }
    if let Some(n) = modulus {
        for k in 0..width {
            let mut v = vec![BigInt::zero(); width];
            v[k] = BigInt::from(n);
            rows.push(v);
        }
    }
    if rows.is_empty() {
        return target.iter().all(|x| ring.is_zero(x)).then(Vec::new);
    }
    let combo = hermite(&rows, width).solve(&flatten(target))?;
    let coeffs: Vec<Elem> = (0..gens.len())
        .map(|k| {
            basis.iter().enumerate().fold(ring.zero(), |acc, (t, b)| {
                ring.add(&acc, &ring.mul(&ring.from_bigint(&combo[k * rank + t]), b))
            })
        })
        .collect();
    let check: Vec<Elem> = (0..target.len())
        .map(|i| gens.iter().zip(&coeffs).fold(ring.zero(), |acc, (g, a)| ring.add(&acc, &ring.mul(&g[i], a))))
        .collect();
    (check == target).then_some(coeffs)
}

/// Index of the ideal `(gens)` in a ring that is free of finite rank over `Z`.
pub fn ideal_index(ring: &Ring, gens: &[Elem]) -> Result<Option<BigInt>> {
    let (modulus, rank) = ring.flat_shape();
    if modulus.is_some() {
        return Err(Error::Unsupported("ideal index is only computed over Z-orders".into()));
    }
    let (rows, _) = ideal_rows(ring, gens);
    if rows.is_empty() {
        return Ok(None);
    }
    Ok(hermite(&rows, rank).index(rank))
}

/// The unique `x` with `d * x = a`.
///
/// Fails with `NotDivisible` when no quotient exists or when `d` is a zero
/// divisor (the quotient would not be unique).
pub fn exact_divide(ring: &Ring, a: &Elem, d: &Elem) -> Result<Elem> {
    if let Some(inv) = ring.try_invert(d) {
        return Ok(ring.mul(a, &inv));
    }
    let (modulus, rank) = ring.flat_shape();
    if modulus.is_some() {
        return Err(Error::NotDivisible(format!(
            "{} is a zero divisor of the finite ring {}",
            ring.show(d),
            ring.describe()
        )));
    }
    let basis = ring.flat_basis();
    let rows: Vec<Vec<BigInt>> = basis.iter().map(|b| ring.to_flat(&ring.mul(d, b))).collect();
    let ech = hermite(&rows, rank);
    if ech.rank() < rank {
        return Err(Error::NotDivisible(format!("{} is a zero divisor", ring.show(d))));
    }
    let combo = ech
        .solve(&ring.to_flat(a))
        .ok_or_else(|| Error::NotDivisible(format!("{} does not divide {}", ring.show(d), ring.show(a))))?;
    let x = ring.from_flat(&combo);
    debug_assert_eq!(ring.mul(d, &x), *a);
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hermite_of_small_lattice() {
        let rows = vec![bi(&[3, 0]), bi(&[0, 3]), bi(&[1, 1]), bi(&[-5, 1])];
        let e = hermite(&rows, 2);
        assert_eq!(e.index(2), Some(BigInt::from(3)));
        // H = U A
        for (hr, ur) in e.h.iter().zip(&e.u) {
            for c in 0..2 {
                let s: BigInt = ur.iter().zip(&rows).map(|(x, r)| x * &r[c]).sum();
                assert_eq!(s, hr[c]);
            }
        }
        let combo = e.solve(&bi(&[2, -1])).unwrap();
        let back: Vec<BigInt> = (0..2).map(|c| combo.iter().zip(&rows).map(|(x, r)| x * &r[c]).sum()).collect();
        assert_eq!(back, bi(&[2, -1]));
        assert!(e.solve(&bi(&[1, 0])).is_none());
    }

    #[test]
    fn unit_ideal_witness_in_zmod() {
        let r = Ring::zmod(12).unwrap();
        let gens = [r.from_i64(8), r.from_i64(9)];
        let c = ideal_membership(&r, &gens, &r.one()).unwrap();
        let s = r.add(&r.mul(&gens[0], &c[0]), &r.mul(&gens[1], &c[1]));
        assert!(r.is_one(&s));
        assert!(ideal_membership(&r, &[r.from_i64(6), r.from_i64(4)], &r.one()).is_none());
    }

    #[test]
    fn quadratic_order_ideals() {
        let k = Ring::quotient(&Ring::integers(), "x", &[5, 0, 1]).unwrap();
        let x = k.generator().unwrap();
        let one_plus_x = k.add(&k.one(), &x);
        assert_eq!(ideal_index(&k, &[k.from_i64(3), one_plus_x.clone()]).unwrap(), Some(BigInt::from(3)));
        assert_eq!(ideal_index(&k, &[k.from_i64(2), one_plus_x.clone()]).unwrap(), Some(BigInt::from(2)));
        assert_eq!(ideal_index(&k, &[k.from_i64(7)]).unwrap(), Some(BigInt::from(49)));
        assert!(ideal_membership(&k, &[k.from_i64(3), one_plus_x.clone()], &k.one()).is_none());
        assert!(ideal_membership(&k, &[k.from_i64(3), one_plus_x], &k.from_i64(3)).is_some());
    }

    #[test]
    fn module_solutions() {
        let r = Ring::zmod(4).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| r.from_i64(x)).collect::<Vec<_>>();
        let a = solve_module(&r, &[e(&[1, 2]), e(&[0, 2])], &e(&[3, 0])).unwrap();
        assert_eq!(a[0], r.from_i64(3));
        assert!(solve_module(&r, &[e(&[2, 0])], &e(&[1, 0])).is_none());
    }

    #[test]
    fn exact_division() {
        let k = Ring::quotient(&Ring::integers(), "x", &[5, 0, 1]).unwrap();
        let x = k.generator().unwrap();
        let a = k.add(&k.from_i64(6), &k.mul(&k.from_i64(4), &x));
        let q = exact_divide(&k, &a, &k.from_i64(2)).unwrap();
        assert_eq!(k.show(&q), "3+2*x");
        assert!(matches!(exact_divide(&k, &k.one(), &k.from_i64(2)), Err(Error::NotDivisible(_))));
        let r = Ring::zmod(4).unwrap();
        assert!(matches!(exact_divide(&r, &r.from_i64(2), &r.from_i64(2)), Err(Error::NotDivisible(_))));
        assert_eq!(exact_divide(&r, &r.from_i64(2), &r.from_i64(3)).unwrap(), r.from_i64(2));
    }
}
