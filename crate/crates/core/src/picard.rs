//! Line bundles on projective space as transition cocycles, and the local
//! trivialization certificates of rank-one projective modules over `A[X]`.

use crate::cocycle::{normalize_cocycle, ratio_power, CocycleData, Normalization};
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::LaurentPoly;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq)]
pub struct LineBundle {
    pub cocycle: CocycleData,
    pub classification: Option<Normalization>,
}

impl LineBundle {
    pub fn new(cocycle: CocycleData) -> Self {
        Self { cocycle, classification: None }
    }

    pub fn n(&self) -> usize {
        self.cocycle.n()
    }

    pub fn tensor(&self, other: &LineBundle) -> Result<LineBundle> {
        Ok(LineBundle::new(self.cocycle.tensor(&other.cocycle)?))
    }

    pub fn dual(&self) -> LineBundle {
        LineBundle::new(self.cocycle.dual())
    }
}

/// Transition functions `t_ij = (X_j/X_i)^d` of `O(d)`.
pub fn twisting_cocycle(n: usize, d: i64, ring: &Ring) -> Result<CocycleData> {
    if n == 0 {
        return Err(Error::Precondition("dimension must be at least 1".into()));
    }
    let pairs = (0..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
    CocycleData::new(n, ring, pairs.map(|(i, j)| ((i, j), ratio_power(ring, n, i, j, d))))
}

pub fn twisting_bundle(n: usize, d: i64, ring: &Ring) -> Result<LineBundle> {
    Ok(LineBundle::new(twisting_cocycle(n, d, ring)?))
}

/// Degree and trivializations; the bundle is `O(degree)` twisted by the coboundary of `s`.
pub fn classify_line_bundle(bundle: &mut LineBundle) -> Result<(i64, Vec<LaurentPoly>)> {
    let norm = normalize_cocycle(&bundle.cocycle)?;
    let out = (norm.degree, norm.s.clone());
    bundle.classification = Some(norm);
    Ok(out)
}

/// Checks `Y X = f^N` (a 1x1 matrix) and `X Y = f^N (I - P)` for idempotent `P`.
pub fn verify_local_trivialization(
    p: &PolyMatrix,
    f: &LaurentPoly,
    x: &PolyMatrix,
    y: &PolyMatrix,
    n: u64,
) -> Result<bool> {
    if !p.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    let size = p.rows();
    if x.rows() != size || x.cols() != 1 || y.rows() != 1 || y.cols() != size {
        return Ok(false);
    }
    let fn_ = f.pow(n);
    let yx = y.mul(x)?;
    if *yx.get(0, 0) != fn_ {
        return Ok(false);
    }
    let complement = PolyMatrix::identity(size, f).sub(p)?;
    Ok(x.mul(y)? == complement.scale(&fn_))
}
