//! Dense matrices over a commutative ring, generic over the entry type so the
//! same code serves matrices over `A` and over `A[X]`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::ring::{Elem, Ring, RingValue};

/// Largest size for cofactor determinants and adjugates.
pub const MAX_COFACTOR_SIZE: usize = 6;

/// Arithmetic needed from matrix entries.
pub trait Entry: Clone + PartialEq + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Entry for RingValue {
    fn zero_like(&self) -> Self {
        self.ring.value(self.ring.zero())
    }
    fn one_like(&self) -> Self {
        self.ring.value(self.ring.one())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        RingValue::is_zero(self)
    }
}

impl Entry for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero_like(self)
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one_like(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

/// Row-major matrix. `zero` fixes the ring even when the matrix is empty.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    zero: T,
    data: Vec<T>,
}

pub type RingMatrix = Matrix<RingValue>;
pub type PolyMatrix = Matrix<LaurentPoly>;

impl<T: Entry> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Entry> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, zero: &T) -> Self {
        let z = zero.zero_like();
        Self { rows, cols, data: vec![z.clone(); rows * cols], zero: z }
    }

    pub fn identity(n: usize, zero: &T) -> Self {
        let mut m = Self::zeros(n, n, zero);
        for i in 0..n {
            m.set(i, i, zero.one_like());
        }
        m
    }

    /// Builds from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>, zero: &T) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Self { rows: r, cols: c, zero: zero.zero_like(), data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn zero_entry(&self) -> &T {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Self { rows: self.rows, cols: self.cols, zero: self.zero.clone(), data: self.data.iter().map(f).collect() }
    }

    pub fn column_vector(v: Vec<T>, zero: &T) -> Self {
        Self { rows: v.len(), cols: 1, zero: zero.zero_like(), data: v }
    }

    pub fn row_vector(v: Vec<T>, zero: &T) -> Self {
        Self { rows: 1, cols: v.len(), zero: zero.zero_like(), data: v }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, &self.zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::InvalidInput(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            zero: self.zero.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            zero: self.zero.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols, &self.zero);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = self.zero.clone();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(o.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Entry::is_zero)
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square() && self.mul(self).map_or(false, |p2| p2 == *self)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(self.zero.clone(), |acc, i| acc.add(self.get(i, i)))
    }

    fn require_cofactor_size(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        if self.rows > MAX_COFACTOR_SIZE {
            return Err(Error::InvalidInput(format!(
                "matrix size {} exceeds the cofactor limit {MAX_COFACTOR_SIZE}",
                self.rows
            )));
        }
        Ok(())
    }

    /// Determinant by memoised Laplace expansion.
    pub fn det(&self) -> Result<T> {
        self.require_cofactor_size()?;
        let mut memo = HashMap::new();
        Ok(self.det_rec(0, &mut memo))
    }

    fn det_rec(&self, used: u32, memo: &mut HashMap<u32, T>) -> T {
        let row = used.count_ones() as usize;
        if row == self.rows {
            return self.zero.one_like();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = self.zero.clone();
        let mut free_before = 0;
        for c in 0..self.cols {
            if used & (1 << c) != 0 {
                continue;
            }
            let e = self.get(row, c);
            if !e.is_zero() {
                let t = e.mul(&self.det_rec(used | (1 << c), memo));
                acc = if free_before % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            free_before += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }

    /// The submatrix with row `i` and column `j` removed.
    pub fn minor_matrix(&self, i: usize, j: usize) -> Self {
        let rows: Vec<Vec<T>> = (0..self.rows)
            .filter(|&r| r != i)
            .map(|r| (0..self.cols).filter(|&c| c != j).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut m = Self::from_rows(rows, &self.zero).expect("rectangular");
        m.cols = self.cols - 1;
        m
    }

    /// Classical adjoint: `adj(m) * m = m * adj(m) = det(m) * I`.
    pub fn adjugate(&self) -> Result<Self> {
        self.require_cofactor_size()?;
        let n = self.rows;
        let mut adj = Self::zeros(n, n, &self.zero);
        if n == 1 {
            adj.set(0, 0, self.zero.one_like());
            return Ok(adj);
        }
        for i in 0..n {
            for j in 0..n {
                let d = self.minor_matrix(i, j).det()?;
                adj.set(j, i, if (i + j) % 2 == 0 { d } else { d.neg() });
            }
        }
        Ok(adj)
    }

    /// All 2x2 minors, in row-pair then column-pair order.
    pub fn two_by_two_minors(&self) -> Vec<T> {
        let mut out = Vec::new();
        for r1 in 0..self.rows {
            for r2 in r1 + 1..self.rows {
                for c1 in 0..self.cols {
                    for c2 in c1 + 1..self.cols {
                        let a = self.get(r1, c1).mul(self.get(r2, c2));
                        let b = self.get(r1, c2).mul(self.get(r2, c1));
                        out.push(a.sub(&b));
                    }
                }
            }
        }
        out
    }
}

impl RingMatrix {
    /// Matrix over `ring` from raw payloads.
    pub fn from_elems(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let zero = ring.value(ring.zero());
        Self::from_rows(rows.into_iter().map(|r| r.into_iter().map(|e| ring.value(e)).collect()).collect(), &zero)
    }

    /// Matrix over `ring` from small integers.
    pub fn from_i64(ring: &Ring, rows: &[&[i64]]) -> Self {
        Self::from_elems(ring, rows.iter().map(|r| r.iter().map(|&v| ring.from_i64(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn ring(&self) -> &Ring {
        &self.zero_entry().ring
    }

    /// Entry payloads, row by row.
    pub fn elems(&self) -> Vec<Vec<Elem>> {
        self.to_rows().into_iter().map(|r| r.into_iter().map(|v| v.elem).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zsqrt5() -> Ring {
        Ring::quotient(&Ring::integers(), "x", &[5, 0, 1]).unwrap()
    }

    #[test]
    fn det_and_adjugate() {
        let r = Ring::integers();
        let m = RingMatrix::from_i64(&r, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det().unwrap(), r.value(r.from_i64(18)));
        let adj = m.adjugate().unwrap();
        let d = m.det().unwrap();
        let id = RingMatrix::identity(3, m.zero_entry()).scale(&d);
        assert_eq!(adj.mul(&m).unwrap(), id);
        assert_eq!(m.mul(&adj).unwrap(), id);
    }

    #[test]
    fn example_matrix_has_determinant_two() {
        let k = zsqrt5();
        let x = k.value(k.generator().unwrap());
        let one = k.value(k.one());
        let two = k.value(k.from_i64(2));
        let m = RingMatrix::from_rows(vec![vec![&one + &x, -&two], vec![-&two, &one - &x]], &one).unwrap();
        assert_eq!(m.det().unwrap(), two);
    }

    #[test]
    fn shape_errors_and_limits() {
        let r = Ring::zmod(4).unwrap();
        let a = RingMatrix::from_i64(&r, &[&[1, 2]]);
        assert!(a.mul(&a).is_err());
        assert!(a.det().is_err());
        let big = RingMatrix::identity(7, a.zero_entry());
        assert!(big.det().is_err());
        assert!(RingMatrix::from_i64(&r, &[&[1, 2], &[0, 0]]).is_idempotent());
    }

    #[test]
    fn polynomial_entries() {
        let r = Ring::zmod(4).unwrap();
        let x = LaurentPoly::from_i64s(&r, &[0, 1]);
        let m = PolyMatrix::from_rows(vec![vec![x.clone(), x.one_like()], vec![x.zero_like(), x.clone()]], &x).unwrap();
        assert_eq!(m.det().unwrap(), &x * &x);
    }
}
