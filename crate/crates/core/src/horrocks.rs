//! Principal generators for ideals of `A[X]` that divide a principal ideal `(f)`
//! with `f` monic.
//!
//! Over a finite ring the formal gcd tree branches on leading coefficients
//! whose invertibility differs between the local factors of `A`. Every branch
//! question is decided by the idempotent splitting, so the tree is driven, not
//! speculative: each node keeps the set of local factors it still covers. A
//! monic generator is then lifted inside every local factor and the local
//! generators are patched along the (orthogonal) idempotents.
//!
//! Infinite rings are accepted only when one of the inputs already generates
//! the ideal.

use crate::error::{Error, Result};
use crate::lattice;
use crate::poly::{monic_divide, LaurentPoly};
use crate::ring::{Elem, Ring};

/// A node of the gcd tree: elements forced into the radical (`ideal`), elements
/// forced invertible (`units`), and the idempotent of the local factors that
/// survive both kinds of constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchContext {
    pub ideal: Vec<Elem>,
    pub units: Vec<Elem>,
    pub idempotent: Elem,
    factors: Vec<Elem>,
}

impl BranchContext {
    /// Primitive idempotents of the local factors covered by this branch.
    pub fn factors(&self) -> &[Elem] {
        &self.factors
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub context: BranchContext,
    /// Residual gcd: monic in `eA[X]` (leading coefficient `e`).
    pub gbar: LaurentPoly,
    /// `gbar = sum combination_i * u_i` modulo the ideal of the branch.
    pub combination: Vec<LaurentPoly>,
    /// Comaximality certificate: `s` lies in the branch monoid and `sum b * s = 1`
    /// over all leaves.
    pub s: Elem,
    pub b: Elem,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcdTree {
    pub leaves: Vec<Leaf>,
    pub depth: usize,
    pub questions: usize,
}

impl GcdTree {
    /// Checks `sum b_j * s_j = 1` over the leaves.
    pub fn comaximal(&self, ring: &Ring) -> bool {
        let sum = self.leaves.iter().fold(ring.zero(), |acc, l| ring.add(&acc, &ring.mul(&l.b, &l.s)));
        ring.is_one(&sum)
    }
}

/// `g = sum into_cert_i * u_i` and `u_i = from_certs_i * g`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedGenerator {
    pub g: LaurentPoly,
    pub into_cert: Vec<LaurentPoly>,
    pub from_certs: Vec<LaurentPoly>,
}

impl CertifiedGenerator {
    pub fn verify(&self, u: &[LaurentPoly]) -> bool {
        if self.into_cert.len() != u.len() || self.from_certs.len() != u.len() {
            return false;
        }
        let combo = u
            .iter()
            .zip(&self.into_cert)
            .fold(self.g.zero_like(), |acc, (ui, ci)| &acc + &(ui * ci));
        combo == self.g && u.iter().zip(&self.from_certs).all(|(ui, qi)| *ui == qi * &self.g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorrocksResult {
    pub generator: CertifiedGenerator,
    /// `f = sum witness_i * u_i`, as supplied or as found.
    pub witness: Vec<LaurentPoly>,
    /// Absent when an input polynomial already generated the ideal.
    pub tree: Option<GcdTree>,
}

// ---- local-factor helpers --------------------------------------------------------

/// `c` restricted to the factor `e` is a unit.
fn unit_in(ring: &Ring, c: &Elem, e: &Elem) -> Option<Elem> {
    let lifted = ring.add(&ring.mul(c, e), &ring.sub(&ring.one(), e));
    ring.try_invert(&lifted).map(|inv| ring.mul(&inv, e))
}

/// Monic completion of a polynomial that is monic in `eA[X]`: adds `(1-e) X^d`.
fn monic_completion(h: &LaurentPoly, e: &Elem) -> LaurentPoly {
    let ring = h.ring();
    let d = h.degree().unwrap_or(0);
    h + &h.monomial_like(vec![d], ring.sub(&ring.one(), e))
}

fn unit_vector(like: &LaurentPoly, n: usize, i: usize, c: &Elem) -> Vec<LaurentPoly> {
    (0..n).map(|k| if k == i { like.constant_like(c.clone()) } else { like.zero_like() }).collect()
}

fn combine(u: &[LaurentPoly], c: &[LaurentPoly]) -> LaurentPoly {
    u.iter().zip(c).fold(u[0].zero_like(), |acc, (a, b)| &acc + &(a * b))
}

fn axpy(a: &[LaurentPoly], q: &LaurentPoly, b: &[LaurentPoly]) -> Vec<LaurentPoly> {
    a.iter().zip(b).map(|(x, y)| x - &(q * y)).collect()
}

fn check_inputs(u: &[LaurentPoly], f: &LaurentPoly) -> Result<()> {
    if u.is_empty() {
        return Err(Error::Precondition("at least one generator is required".into()));
    }
    for p in u.iter().chain(std::iter::once(f)) {
        p.require_univariate_poly("Horrocks")?;
        if p.ring() != f.ring() {
            return Err(Error::RingMismatch("generators and f live in different rings".into()));
        }
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(())
}

// ---- formal gcd tree ----------------------------------------------------------------

enum Normalized {
    Zero,
    Monic(LaurentPoly, Vec<LaurentPoly>),
    Split { c: Elem, units: Vec<Elem>, radical: Vec<Elem> },
}

struct Node {
    ideal: Vec<Elem>,
    units: Vec<Elem>,
    factors: Vec<Elem>,
    depth: usize,
}

impl Node {
    fn idempotent(&self, ring: &Ring) -> Elem {
        self.factors.iter().fold(ring.zero(), |acc, e| ring.add(&acc, e))
    }

    /// Strips leading coefficients that vanish on every covered factor and
    /// makes the rest monic, or reports the first coefficient that splits them.
    fn normalize(&mut self, mut p: LaurentPoly, mut combo: Vec<LaurentPoly>, e: &Elem) -> Normalized {
        let ring = p.ring().clone();
        while let Some(d) = p.degree() {
            let c = p.leading_coeff();
            let (units, radical): (Vec<Elem>, Vec<Elem>) =
                self.factors.iter().cloned().partition(|k| unit_in(&ring, &c, k).is_some());
            if radical.is_empty() {
                let inv = unit_in(&ring, &c, e).expect("unit on every factor");
                let scale = p.constant_like(inv);
                combo = combo.iter().map(|a| a * &scale).collect();
                return Normalized::Monic(&p * &scale, combo);
            }
            if !units.is_empty() {
                return Normalized::Split { c, units, radical };
            }
            if !self.ideal.contains(&c) {
                self.ideal.push(c.clone());
            }
            p = p.filter_terms(|x| x[0] != d);
        }
        Normalized::Zero
    }

    /// Euclid over all generators, modulo the radical part of the node.
    fn run(&mut self, u: &[LaurentPoly]) -> Result<std::result::Result<(LaurentPoly, Vec<LaurentPoly>), Normalized>> {
        let ring = u[0].ring().clone();
        let e = self.idempotent(&ring);
        let n = u.len();
        let mut g: Option<(LaurentPoly, Vec<LaurentPoly>)> = None;
        for (i, ui) in u.iter().enumerate() {
            let mut b = (ui.scale(&e), unit_vector(ui, n, i, &e));
            loop {
                let reduced = match &g {
                    None => b.clone(),
                    Some((gp, gc)) => {
                        let (q, r) = monic_divide(&b.0, &monic_completion(gp, &e))?;
                        let q = q.scale(&e);
                        (r.scale(&e), axpy(&b.1, &q, gc))
                    }
                };
                match self.normalize(reduced.0, reduced.1, &e) {
                    Normalized::Zero => break,
                    Normalized::Monic(p, c) => {
                        // new remainder becomes the divisor, old divisor the dividend
                        match g.replace((p, c)) {
                            Some(old) => b = old,
                            None => break,
                        }
                    }
                    split @ Normalized::Split { .. } => return Ok(Err(split)),
                }
            }
        }
        let like = u[0].zero_like();
        Ok(Ok(g.unwrap_or_else(|| (like.clone(), vec![like; n]))))
    }
}

/// Formal gcd of `u` with one leaf per consistent set of invertibility answers.
pub fn formal_gcd_tree(u: &[LaurentPoly]) -> Result<GcdTree> {
    if u.is_empty() {
        return Err(Error::Precondition("at least one generator is required".into()));
    }
    let ring = u[0].ring().clone();
    let factors = local_factors(&ring)?;
    let mut stack = vec![Node { ideal: Vec::new(), units: Vec::new(), factors, depth: 0 }];
    let mut leaves = Vec::new();
    let (mut depth, mut questions) = (0, 0);
    while let Some(mut node) = stack.pop() {
        depth = depth.max(node.depth);
        match node.run(u)? {
            Ok((gbar, combination)) => {
                let e = node.idempotent(&ring);
                let s = node.units.iter().fold(ring.one(), |acc, x| ring.mul(&acc, x));
                let b = unit_in(&ring, &s, &e).expect("branch units are invertible on the branch");
                leaves.push(Leaf {
                    context: BranchContext { ideal: node.ideal, units: node.units, idempotent: e, factors: node.factors },
                    gbar,
                    combination,
                    s,
                    b,
                });
            }
            Err(Normalized::Split { c, units, radical }) => {
                questions += 1;
                let mut right = Node {
                    ideal: node.ideal.clone(),
                    units: node.units.clone(),
                    factors: radical,
                    depth: node.depth + 1,
                };
                right.ideal.push(c.clone());
                let mut left = Node { ideal: node.ideal, units: node.units, factors: units, depth: node.depth + 1 };
                left.units.push(c);
                // left branch first in the output
                stack.push(right);
                stack.push(left);
            }
            Err(_) => unreachable!(),
        }
    }
    let tree = GcdTree { leaves, depth, questions };
    if !tree.comaximal(&ring) {
        return Err(Error::LiftFailed("leaf monoids are not comaximal".into()));
    }
    for leaf in &tree.leaves {
        if !residual_certificate_holds(u, leaf) {
            return Err(Error::LiftFailed(format!("residual gcd certificate fails at leaf {}", leaf.gbar)));
        }
    }
    Ok(tree)
}

fn local_factors(ring: &Ring) -> Result<Vec<Elem>> {
    if !ring.is_finite() {
        return Err(Error::UnsupportedRing(format!(
            "{} is infinite; invertibility modulo the branch ideal is not decidable here",
            ring.describe()
        )));
    }
    ring.primitive_idempotents()
}

/// `gbar - sum a_i u_i` has coefficients in the ideal generated by the branch
/// ideal and `1 - e`.
fn residual_certificate_holds(u: &[LaurentPoly], leaf: &Leaf) -> bool {
    let ring = u[0].ring();
    let diff = &leaf.gbar - &combine(u, &leaf.combination).scale(&leaf.context.idempotent);
    let mut gens = leaf.context.ideal.clone();
    gens.push(ring.sub(&ring.one(), &leaf.context.idempotent));
    let ok = diff.terms().all(|(_, c)| lattice::ideal_membership(ring, &gens, c).is_some());
    ok
}

// ---- monic lift inside one local factor -------------------------------------------

/// Monic generator of `e L` inside the local factor `eA`, with `h = sum c_i u_i`.
///
/// Unit-pivot row reduction of `L/(f)`, spanned by `X^j u_i mod f`, from the
/// top degree down: over a local ring the pivots are exactly the degrees
/// `d..deg f`, and the pivot row of degree `d` is the monic lift.
pub fn lift_monic(
    u: &[LaurentPoly],
    witness: &[LaurentPoly],
    f: &LaurentPoly,
    e: &Elem,
) -> Result<(LaurentPoly, Vec<LaurentPoly>)> {
    let ring = f.ring().clone();
    let n = u.len();
    let s = f.degree().unwrap_or(0);
    let fe = f.scale(e);
    let mut rows: Vec<(LaurentPoly, Vec<LaurentPoly>)> = Vec::new();
    for (i, ui) in u.iter().enumerate() {
        for j in 0..s {
            let shifted = ui.mul_monomial(&[j], e);
            let (_, r) = monic_divide(&shifted, f)?;
            let combo = (0..n)
                .map(|k| if k == i { f.monomial_like(vec![j], e.clone()) } else { f.zero_like() })
                .collect();
            rows.push((r, combo));
        }
    }
    let mut pivot_of: Vec<Option<usize>> = vec![None; s as usize];
    for col in (0..s).rev() {
        let found = rows.iter().enumerate().find_map(|(idx, (p, _))| {
            if pivot_of.contains(&Some(idx)) {
                return None;
            }
            unit_in(&ring, &p.coeff_at(col), e).map(|inv| (idx, inv))
        });
        let Some((idx, inv)) = found else { continue };
        let scale = f.constant_like(inv);
        rows[idx].0 = &rows[idx].0 * &scale;
        rows[idx].1 = rows[idx].1.iter().map(|a| a * &scale).collect();
        let pivot = rows[idx].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == idx {
                continue;
            }
            let c = row.0.coeff_at(col);
            if ring.is_zero(&c) {
                continue;
            }
            let cp = f.constant_like(c);
            row.0 = &row.0 - &(&pivot.0 * &cp);
            row.1 = axpy(&row.1, &cp, &pivot.1);
        }
        pivot_of[col as usize] = Some(idx);
    }
    let lowest = pivot_of.iter().position(Option::is_some);
    let (h, cert) = match lowest {
        None => (fe, witness.iter().map(|v| v.scale(e)).collect::<Vec<_>>()),
        Some(d) => {
            let (h, a) = rows[pivot_of[d].unwrap()].clone();
            // a realises h only modulo f; the witness turns the multiple of f into generators
            let (q, r) = monic_divide(&combine(u, &a), f)?;
            if r != h {
                return Err(Error::LiftFailed("row combination drifted from its polynomial".into()));
            }
            let cert = axpy(&a, &q, witness).iter().map(|c| c.scale(e)).collect();
            (h, cert)
        }
    };
    if combine(u, &cert) != h {
        return Err(Error::LiftFailed(format!("certificate for {h} does not re-multiply")));
    }
    Ok((h, cert))
}

/// Quotients `e u_i = q_i h` for a generator `h` monic in `eA[X]`, or `None`
/// if some `u_i` is not a multiple.
fn divide_all(u: &[LaurentPoly], h: &LaurentPoly, e: &Elem) -> Result<Option<Vec<LaurentPoly>>> {
    let hm = monic_completion(h, e);
    let mut out = Vec::with_capacity(u.len());
    for ui in u {
        let (q, r) = monic_divide(&ui.scale(e), &hm)?;
        if !r.scale(e).is_zero() {
            return Ok(None);
        }
        out.push(q.scale(e));
    }
    Ok(Some(out))
}

// ---- witnesses -------------------------------------------------------------------

/// Checks `f = sum u_i v_i`.
pub fn check_witness(u: &[LaurentPoly], f: &LaurentPoly, v: &[LaurentPoly]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::WitnessInvalid(format!("{} generators but {} witness entries", u.len(), v.len())));
    }
    let s = combine(u, v);
    if s != *f {
        return Err(Error::WitnessInvalid(format!("sum u_i v_i = {s}, expected {f}")));
    }
    Ok(())
}

/// Finds `v` with `f = sum u_i v_i` and `deg v_i <= bound` by solving the
/// linear system over the scalar ring.
pub fn find_witness(u: &[LaurentPoly], f: &LaurentPoly, bound: i64) -> Option<Vec<LaurentPoly>> {
    let ring = f.ring();
    let top = u.iter().filter_map(LaurentPoly::degree).max().unwrap_or(0) + bound;
    let top = top.max(f.degree().unwrap_or(0));
    let dense = |p: &LaurentPoly| -> Vec<Elem> { (0..=top).map(|k| p.coeff_at(k)).collect() };
    let one = ring.one();
    let mut gens: Vec<Vec<Elem>> = Vec::new();
    for ui in u {
        for j in 0..=bound {
            gens.push(dense(&ui.mul_monomial(&[j], &one)));
        }
    }
    let a = lattice::solve_module(ring, &gens, &dense(f))?;
    let per = bound as usize + 1;
    let v: Vec<LaurentPoly> = (0..u.len())
        .map(|i| {
            (0..per).fold(f.zero_like(), |p, j| &p + &f.monomial_like(vec![j as i64], a[i * per + j].clone()))
        })
        .collect();
    (combine(u, &v) == *f).then_some(v)
}

// ---- main entry point ------------------------------------------------------------

/// Certified principal generator of `(u_1, ..., u_n)`, given `f` monic with
/// `f = sum u_i v_i`. Without a witness one of degree at most
/// `deg f + max deg u_i` is searched for.
pub fn principal_generator(
    u: &[LaurentPoly],
    f: &LaurentPoly,
    witness: Option<&[LaurentPoly]>,
) -> Result<HorrocksResult> {
    check_inputs(u, f)?;
    let witness = match witness {
        Some(v) => {
            check_witness(u, f, v)?;
            v.to_vec()
        }
        None => {
            let bound = f.degree().unwrap_or(0) + u.iter().filter_map(LaurentPoly::degree).max().unwrap_or(0);
            find_witness(u, f, bound).ok_or_else(|| {
                Error::WitnessInvalid(format!("f is not in the ideal with multipliers of degree <= {bound}"))
            })?
        }
    };
    let ring = f.ring().clone();
    if let Some(generator) = direct_generator(u, f, &witness)? {
        if !ring.is_finite() {
            return Ok(HorrocksResult { generator, witness, tree: None });
        }
    }
    let tree = formal_gcd_tree(u)?;
    let zero_cert = || vec![f.zero_like(); u.len()];
    let (mut g, mut into_cert, mut from_certs) = (f.zero_like(), zero_cert(), zero_cert());
    for leaf in &tree.leaves {
        for e in leaf.context.factors() {
            let (h, cert) = lift_monic(u, &witness, f, e)?;
            let residual = leaf.gbar.scale(e);
            let agrees = h.degree() == residual.degree()
                && (&h - &residual).terms().all(|(_, c)| unit_in(&ring, c, e).is_none());
            if !agrees {
                return Err(Error::LiftFailed(format!("lift {h} does not reduce to {residual}")));
            }
            let q = divide_all(u, &h, e)?.ok_or_else(|| {
                Error::NotPrincipalDetected(format!("{h} does not divide every generator; check the witness"))
            })?;
            g = &g + &h;
            into_cert = into_cert.iter().zip(&cert).map(|(a, b)| a + b).collect();
            from_certs = from_certs.iter().zip(&q).map(|(a, b)| a + b).collect();
        }
    }
    let generator = CertifiedGenerator { g, into_cert, from_certs };
    if !generator.verify(u) {
        return Err(Error::NotPrincipalDetected("patched generator fails its certificates".into()));
    }
    Ok(HorrocksResult { generator, witness, tree: Some(tree) })
}

/// `f` or a monic `u_i` that already divides every generator.
fn direct_generator(u: &[LaurentPoly], f: &LaurentPoly, witness: &[LaurentPoly]) -> Result<Option<CertifiedGenerator>> {
    let one = f.ring().one();
    let n = u.len();
    let candidates = u
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_monic())
        .map(|(i, p)| (p.clone(), unit_vector(f, n, i, &one)))
        .chain(std::iter::once((f.clone(), witness.to_vec())));
    for (h, cert) in candidates {
        if let Some(q) = divide_all(u, &h, &one)? {
            let g = CertifiedGenerator { g: h, into_cert: cert, from_certs: q };
            if g.verify(u) {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
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
    fn gcd_tree_examples() {
        let f2 = z(2);
        let t = formal_gcd_tree(&[p(&f2, &[0, 1, 1]), p(&f2, &[0, 1])]).unwrap();
        assert_eq!(t.leaves.len(), 1);
        assert_eq!(t.leaves[0].gbar, p(&f2, &[0, 1]));

        let r4 = z(4);
        let t = formal_gcd_tree(&[p(&r4, &[2, 1]), p(&r4, &[0, 0, 1])]).unwrap();
        assert_eq!(t.leaves.len(), 1);
        assert_eq!(t.questions, 0);
        // residually X
        let g = &t.leaves[0].gbar;
        assert!(g.is_monic() && g.degree() == Some(1));

        let r6 = z(6);
        let t = formal_gcd_tree(&[p(&r6, &[4, 3])]).unwrap();
        assert_eq!(t.leaves.len(), 2);
        assert_eq!(t.depth, 1);
        assert_eq!(t.leaves[0].context.units, vec![r6.from_i64(3)]);
        assert_eq!(t.leaves[0].gbar, p(&r6, &[0, 3]));
        assert_eq!(t.leaves[1].context.ideal, vec![r6.from_i64(3)]);
        assert_eq!(t.leaves[1].gbar, p(&r6, &[4]));
        assert!(t.comaximal(&r6));
    }

    #[test]
    fn lift_examples() {
        let r4 = z(4);
        let one = r4.one();
        let u = [p(&r4, &[2, 1]), p(&r4, &[0, 0, 1])];
        let f = p(&r4, &[0, 0, 1]);
        let w = find_witness(&u, &f, 2).unwrap();
        let (h, cert) = lift_monic(&u, &w, &f, &one).unwrap();
        assert_eq!(h, p(&r4, &[2, 1]));
        assert_eq!(combine(&u, &cert), h);

        let u = [p(&r4, &[2, 0, 1])];
        let f = p(&r4, &[2, 0, 1]);
        let (h, _) = lift_monic(&u, &[p(&r4, &[1])], &f, &one).unwrap();
        assert_eq!(h, f);
    }

    #[test]
    fn generator_examples() {
        let r4 = z(4);
        let u = [p(&r4, &[2, 1]), p(&r4, &[0, 0, 1])];
        let f = p(&r4, &[0, 0, 1]);
        let res = principal_generator(&u, &f, Some(&[p(&r4, &[2, 1]), p(&r4, &[])])).unwrap();
        assert_eq!(res.generator.g, p(&r4, &[2, 1]));
        assert!(res.generator.verify(&u));

        let bad = principal_generator(&u, &f, Some(&[p(&r4, &[1]), p(&r4, &[])]));
        assert!(matches!(bad, Err(Error::WitnessInvalid(_))));

        let g = p(&r4, &[1, 3, 1]);
        let res = principal_generator(&[g.clone()], &g, Some(&[p(&r4, &[1])])).unwrap();
        assert_eq!(res.generator.g, g);
    }

    #[test]
    fn non_connected_patching() {
        let r6 = z(6);
        let u = [p(&r6, &[4, 3])];
        let f = p(&r6, &[0, 1]);
        let res = principal_generator(&u, &f, Some(&[p(&r6, &[3, 4])])).unwrap();
        assert_eq!(res.generator.g, p(&r6, &[4, 3]));
        assert!(res.generator.verify(&u));
        // found without a supplied witness as well
        let res = principal_generator(&u, &f, None).unwrap();
        assert_eq!(res.generator.g, p(&r6, &[4, 3]));
    }

    #[test]
    fn infinite_rings_need_a_direct_generator() {
        let zz = Ring::integers();
        let u = [p(&zz, &[1, 1]), p(&zz, &[-1, 0, 1])];
        let f = p(&zz, &[1, 1]);
        let res = principal_generator(&u, &f, Some(&[p(&zz, &[1]), p(&zz, &[])])).unwrap();
        assert_eq!(res.generator.g, f);
        assert!(res.tree.is_none());

        // (X+1) * (2, 2X+1) with f = X(X+1): no input divides everything
        let u = [p(&zz, &[2, 2]), p(&zz, &[1, 3, 2])];
        let f = p(&zz, &[0, 1, 1]);
        let res = principal_generator(&u, &f, Some(&[p(&zz, &[0, 0, -1]), p(&zz, &[0, 1])]));
        assert!(matches!(res, Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn over_f4() {
        let k = Ring::f4();
        let y = k.generator().unwrap();
        let x = LaurentPoly::zero(&k, &["X"]).var_like(0);
        // h = X + y, w = (X, X + 1): (h) = (hX, h(X+1))
        let h = &x + &x.constant_like(y.clone());
        let u = [&h * &x, &h * &(&x + &x.one_like())];
        let f = h.clone();
        let res = principal_generator(&u, &f, None).unwrap();
        assert_eq!(res.generator.g, h);
    }
}
