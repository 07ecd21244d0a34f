//! Explicitly presented commutative rings.
//!
//! The supported universe is closed under three constructors: the integers,
//! the residue rings `Z/n`, and quotients `B[x]/(m)` of a supported ring `B`
//! by a monic polynomial `m`. Every element has a unique canonical payload, so
//! structural equality is ring equality, and the three decision procedures the
//! algorithms rely on (zero test, unit test with inverse, nilpotency test with
//! order) are total.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted for `Z/n` (trial factorisation must stay cheap).
pub const MAX_MODULUS: u64 = 1_000_000_000_000;

/// Largest finite ring that is ever enumerated element by element.
pub const MAX_ENUMERATED: u128 = 1 << 20;

/// Structural description of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Modular(u64),
    /// `base[var]/(modulus)`, modulus little-endian with a leading one.
    Quotient {
        base: Box<RingSpec>,
        var: String,
        modulus: Vec<Elem>,
    },
}

/// Canonical payload of a ring element. Only meaningful together with a [`Ring`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(BigInt),
    Mod(u64),
    /// Coefficients over the base ring, exactly `deg(modulus)` of them.
    Poly(Vec<Elem>),
}

/// Asserted facts about a ring that cannot always be decided.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RingFacts {
    pub is_connected: bool,
    /// Generators of an ideal known to be nil.
    pub jacobson_hint: Vec<Elem>,
}

#[derive(Debug)]
enum Kind {
    Int,
    Zmod {
        n: u64,
        /// Prime-power factorisation `(p, e)`.
        factors: Vec<(u64, u32)>,
    },
    Quotient {
        base: Ring,
        var: String,
        /// Monic modulus, little-endian, length `degree + 1`.
        modulus: Vec<Elem>,
    },
}

#[derive(Debug)]
struct RingInner {
    spec: RingSpec,
    kind: Kind,
    facts: Option<RingFacts>,
}

/// Shareable handle to a ring with exact arithmetic.
#[derive(Clone)]
pub struct Ring {
    inner: Arc<RingInner>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.describe())
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl Eq for Ring {}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

impl Ring {
    /// Builds a ring from its spec, validating the well-formedness invariants.
    pub fn new(spec: RingSpec) -> Result<Ring> {
        Self::build(spec, None)
    }

    /// Like [`Ring::new`] but attaches asserted facts, validated where decidable.
    pub fn with_facts(spec: RingSpec, facts: RingFacts) -> Result<Ring> {
        let ring = Self::build(spec, Some(facts.clone()))?;
        for h in &facts.jacobson_hint {
            ring.check_elem(h)?;
            if ring.nilpotent_order(h).is_none() {
                return Err(Error::MalformedSpec(format!(
                    "jacobson hint {} is not nilpotent",
                    ring.show(h)
                )));
            }
        }
        if ring.is_finite() || matches!(ring.inner.kind, Kind::Int) {
            let computed = ring.idempotents()?.len() == 2;
            if computed != facts.is_connected {
                return Err(Error::MalformedSpec(format!(
                    "asserted connectedness {} contradicts the idempotent scan",
                    facts.is_connected
                )));
            }
        }
        Ok(ring)
    }

    fn build(spec: RingSpec, facts: Option<RingFacts>) -> Result<Ring> {
        let kind = match &spec {
            RingSpec::Integers => Kind::Int,
            RingSpec::Modular(n) => {
                if *n < 2 {
                    return Err(Error::MalformedSpec(format!("modulus n = {n} must be at least 2")));
                }
                if *n > MAX_MODULUS {
                    return Err(Error::MalformedSpec(format!("modulus n = {n} exceeds {MAX_MODULUS}")));
                }
                Kind::Zmod { n: *n, factors: factorize(*n) }
            }
            RingSpec::Quotient { base, var, modulus } => {
                let base = Ring::new((**base).clone())?;
                if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(Error::MalformedSpec(format!("bad variable name {var:?}")));
                }
                if modulus.len() < 2 {
                    return Err(Error::MalformedSpec("modulus must have degree at least 1".into()));
                }
                for c in modulus {
                    base.check_elem(c)?;
                }
                if !base.is_one(modulus.last().unwrap()) {
                    return Err(Error::MalformedSpec("modulus is not monic".into()));
                }
                Kind::Quotient { base, var: var.clone(), modulus: modulus.clone() }
            }
        };
        Ok(Ring { inner: Arc::new(RingInner { spec, kind, facts }) })
    }

    pub fn integers() -> Ring {
        Ring::new(RingSpec::Integers).unwrap()
    }

    pub fn zmod(n: u64) -> Result<Ring> {
        Ring::new(RingSpec::Modular(n))
    }

    /// `base[var]/(modulus)` with the modulus given by small integer coefficients.
    pub fn quotient(base: &Ring, var: &str, modulus: &[i64]) -> Result<Ring> {
        let modulus = modulus.iter().map(|&c| base.from_i64(c)).collect();
        Ring::new(RingSpec::Quotient { base: Box::new(base.spec().clone()), var: var.into(), modulus })
    }

    /// The field with four elements, `F_2[y]/(y^2+y+1)`.
    pub fn f4() -> Ring {
        Ring::quotient(&Ring::zmod(2).unwrap(), "y", &[1, 1, 1]).unwrap()
    }

    pub fn spec(&self) -> &RingSpec {
        &self.inner.spec
    }

    pub fn facts(&self) -> Option<&RingFacts> {
        self.inner.facts.as_ref()
    }

    /// The base ring of a quotient.
    pub fn base(&self) -> Option<&Ring> {
        match &self.inner.kind {
            Kind::Quotient { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn var_name(&self) -> Option<&str> {
        match &self.inner.kind {
            Kind::Quotient { var, .. } => Some(var),
            _ => None,
        }
    }

    /// Monic modulus of a quotient, little-endian.
    pub fn modulus(&self) -> Option<&[Elem]> {
        match &self.inner.kind {
            Kind::Quotient { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Degree of a quotient over its base (1 for integers and `Z/n`).
    pub fn degree(&self) -> usize {
        match &self.inner.kind {
            Kind::Quotient { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    /// The modulus `n` when this is `Z/n`.
    pub fn modular_n(&self) -> Option<u64> {
        match &self.inner.kind {
            Kind::Zmod { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// Names of all adjoined variables, innermost first.
    pub fn adjoined_vars(&self) -> Vec<String> {
        match &self.inner.kind {
            Kind::Quotient { base, var, .. } => {
                let mut v = base.adjoined_vars();
                v.push(var.clone());
                v
            }
            _ => Vec::new(),
        }
    }

    /// Short human-readable description, e.g. `Z/4` or `Z[x]/(x^2+5)`.
    pub fn describe(&self) -> String {
        match &self.inner.kind {
            Kind::Int => "Z".into(),
            Kind::Zmod { n, .. } => format!("Z/{n}"),
            Kind::Quotient { base, var, modulus } => {
                let m = Elem::Poly(modulus[..modulus.len() - 1].to_vec());
                let tail = self.show(&m);
                let d = modulus.len() - 1;
                let lead = if d == 1 { var.clone() } else { format!("{var}^{d}") };
                let b = base.describe();
                let b = if base.base().is_some() { format!("({b})") } else { b };
                if tail == "0" {
                    format!("{b}[{var}]/({lead})")
                } else if tail.starts_with('-') {
                    format!("{b}[{var}]/({lead}{tail})")
                } else {
                    format!("{b}[{var}]/({lead}+{tail})")
                }
            }
        }
    }

    // ---- canonical construction -------------------------------------------------

    pub fn zero(&self) -> Elem {
        match &self.inner.kind {
            Kind::Int => Elem::Int(BigInt::zero()),
            Kind::Zmod { .. } => Elem::Mod(0),
            Kind::Quotient { base, modulus, .. } => Elem::Poly(vec![base.zero(); modulus.len() - 1]),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match &self.inner.kind {
            Kind::Int => Elem::Int(v.clone()),
            Kind::Zmod { n, .. } => {
                let r = v.mod_floor(&BigInt::from(*n));
                Elem::Mod(r.to_u64().unwrap())
            }
            Kind::Quotient { base, modulus, .. } => {
                let mut c = vec![base.zero(); modulus.len() - 1];
                c[0] = base.from_bigint(v);
                Elem::Poly(c)
            }
        }
    }

    /// Embeds an element of the base ring as a constant.
    pub fn from_base(&self, b: &Elem) -> Elem {
        match &self.inner.kind {
            Kind::Quotient { base, modulus, .. } => {
                let mut c = vec![base.zero(); modulus.len() - 1];
                c[0] = b.clone();
                Elem::Poly(c)
            }
            _ => b.clone(),
        }
    }

    /// The adjoined generator `x` of a quotient ring.
    pub fn generator(&self) -> Option<Elem> {
        match &self.inner.kind {
            Kind::Quotient { base, modulus, .. } => {
                let d = modulus.len() - 1;
                let mut c = vec![base.zero(); d];
                if d == 1 {
                    // x = -m_0 when the modulus is linear
                    c[0] = base.neg(&modulus[0]);
                } else {
                    c[1] = base.one();
                }
                Some(Elem::Poly(c))
            }
            _ => None,
        }
    }

    /// Builds a quotient element from base coefficients of any length, reducing modulo the modulus.
    pub fn from_coeffs(&self, coeffs: &[Elem]) -> Result<Elem> {
        let (base, modulus) = match &self.inner.kind {
            Kind::Quotient { base, modulus, .. } => (base, modulus),
            _ => return Err(Error::Precondition("from_coeffs needs a quotient ring".into())),
        };
        for c in coeffs {
            base.check_elem(c)?;
        }
        Ok(self.reduce_poly(base, modulus, coeffs.to_vec()))
    }

    fn reduce_poly(&self, base: &Ring, modulus: &[Elem], mut prod: Vec<Elem>) -> Elem {
        let d = modulus.len() - 1;
        if prod.len() > d {
            for k in (d..prod.len()).rev() {
                let c = prod[k].clone();
                if base.is_zero(&c) {
                    continue;
                }
                for j in 0..d {
                    let t = base.mul(&c, &modulus[j]);
                    prod[k - d + j] = base.sub(&prod[k - d + j], &t);
                }
                prod[k] = base.zero();
            }
        }
        prod.resize(d, base.zero());
        prod.truncate(d);
        Elem::Poly(prod)
    }

    /// Checks that a payload is canonical for this ring.
    pub fn check_elem(&self, e: &Elem) -> Result<()> {
        match (&self.inner.kind, e) {
            (Kind::Int, Elem::Int(_)) => Ok(()),
            (Kind::Zmod { n, .. }, Elem::Mod(v)) if v < n => Ok(()),
            (Kind::Quotient { base, modulus, .. }, Elem::Poly(c)) if c.len() == modulus.len() - 1 => {
                c.iter().try_for_each(|x| base.check_elem(x))
            }
            _ => Err(Error::RingMismatch(format!("{e:?} is not a canonical element of {}", self.describe()))),
        }
    }

    // ---- arithmetic ---------------------------------------------------------------

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.inner.kind, a, b) {
            (Kind::Int, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (Kind::Zmod { n, .. }, Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 + *y as u128) % *n as u128) as u64)
            }
            (Kind::Quotient { base, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                Elem::Poly(x.iter().zip(y).map(|(s, t)| base.add(s, t)).collect())
            }
            _ => panic!("ring mismatch in add for {}", self.describe()),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.inner.kind, a) {
            (Kind::Int, Elem::Int(x)) => Elem::Int(-x),
            (Kind::Zmod { n, .. }, Elem::Mod(x)) => Elem::Mod(if *x == 0 { 0 } else { n - x }),
            (Kind::Quotient { base, .. }, Elem::Poly(x)) => Elem::Poly(x.iter().map(|s| base.neg(s)).collect()),
            _ => panic!("ring mismatch in neg for {}", self.describe()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.inner.kind, a, b) {
            (Kind::Int, Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (Kind::Zmod { n, .. }, Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 * *y as u128) % *n as u128) as u64)
            }
            (Kind::Quotient { base, modulus, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                let d = x.len();
                let mut prod = vec![base.zero(); 2 * d - 1];
                for (i, s) in x.iter().enumerate() {
                    if base.is_zero(s) {
                        continue;
                    }
                    for (j, t) in y.iter().enumerate() {
                        if base.is_zero(t) {
                            continue;
                        }
                        let st = base.mul(s, t);
                        prod[i + j] = base.add(&prod[i + j], &st);
                    }
                }
                self.reduce_poly(base, modulus, prod)
            }
            _ => panic!("ring mismatch in mul for {}", self.describe()),
        }
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(x) => x.is_zero(),
            Elem::Mod(x) => *x == 0,
            Elem::Poly(c) => match &self.inner.kind {
                Kind::Quotient { base, .. } => c.iter().all(|x| base.is_zero(x)),
                _ => false,
            },
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    // ---- decision procedures ------------------------------------------------------

    /// Multiplicative inverse, if one exists.
    pub fn try_invert(&self, a: &Elem) -> Option<Elem> {
        match (&self.inner.kind, a) {
            (Kind::Int, Elem::Int(x)) => {
                if x.abs().is_one() {
                    Some(Elem::Int(x.clone()))
                } else {
                    None
                }
            }
            (Kind::Zmod { n, .. }, Elem::Mod(x)) => mod_inverse(*x, *n).map(Elem::Mod),
            (Kind::Quotient { base, modulus, .. }, Elem::Poly(_)) => {
                // a is a unit iff the determinant of multiplication-by-a is a unit of the base;
                // the inverse is det^-1 times the first column of the adjugate.
                let d = modulus.len() - 1;
                let cols: Vec<Vec<Elem>> = (0..d)
                    .map(|j| {
                        let mut xj = vec![base.zero(); d];
                        xj[j] = base.one();
                        match self.mul(a, &Elem::Poly(xj)) {
                            Elem::Poly(c) => c,
                            _ => unreachable!(),
                        }
                    })
                    .collect();
                // mat[i][j] = coefficient i of a*x^j
                let mat: Vec<Vec<Elem>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
                let det = base.det(&mat);
                let det_inv = base.try_invert(&det)?;
                let mut inv = Vec::with_capacity(d);
                for i in 0..d {
                    // adj[i][0] = (-1)^i * minor(row 0, column i)
                    let minor: Vec<Vec<Elem>> = (1..d)
                        .map(|r| (0..d).filter(|&c| c != i).map(|c| mat[r][c].clone()).collect())
                        .collect();
                    let mut m = base.det(&minor);
                    if i % 2 == 1 {
                        m = base.neg(&m);
                    }
                    inv.push(base.mul(&m, &det_inv));
                }
                let inv = Elem::Poly(inv);
                debug_assert!(self.is_one(&self.mul(a, &inv)));
                Some(inv)
            }
            _ => panic!("ring mismatch in try_invert for {}", self.describe()),
        }
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.try_invert(a).is_some()
    }

    /// Division-free determinant by memoised Laplace expansion along rows.
    pub fn det(&self, m: &[Vec<Elem>]) -> Elem {
        let d = m.len();
        if d == 0 {
            return self.one();
        }
        assert!(d <= 24, "determinant size {d} too large");
        let mut memo: HashMap<u32, Elem> = HashMap::new();
        self.det_rec(m, 0, &mut memo)
    }

    fn det_rec(&self, m: &[Vec<Elem>], used: u32, memo: &mut HashMap<u32, Elem>) -> Elem {
        let d = m.len();
        let row = used.count_ones() as usize;
        if row == d {
            return self.one();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = self.zero();
        let mut free_before = 0;
        for c in 0..d {
            if used & (1 << c) != 0 {
                continue;
            }
            let entry = &m[row][c];
            if !self.is_zero(entry) {
                let sub = self.det_rec(m, used | (1 << c), memo);
                let t = self.mul(entry, &sub);
                acc = if free_before % 2 == 0 { self.add(&acc, &t) } else { self.sub(&acc, &t) };
            }
            free_before += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }

    /// Ideal-nilpotency bound: the nilradical `N` of this ring satisfies `N^b = 0`.
    ///
    /// `Z` gives 1, `Z/n` the largest prime exponent of `n`, and a rank-`d`
    /// quotient over `B` gives `d` times the bound of `B`.
    pub fn nil_bound(&self) -> u64 {
        match &self.inner.kind {
            Kind::Int => 1,
            Kind::Zmod { factors, .. } => factors.iter().map(|&(_, e)| e as u64).max().unwrap_or(1),
            Kind::Quotient { base, modulus, .. } => (modulus.len() as u64 - 1) * base.nil_bound(),
        }
    }

    /// Smallest `e >= 1` with `a^e = 0`, or `None` if `a` is not nilpotent.
    pub fn nilpotent_order(&self, a: &Elem) -> Option<u64> {
        if self.is_zero(a) {
            return Some(1);
        }
        if let Kind::Int = self.inner.kind {
            return None;
        }
        let bound = self.nil_bound();
        let mut p = a.clone();
        for e in 2..=bound {
            p = self.mul(&p, a);
            if self.is_zero(&p) {
                return Some(e);
            }
        }
        None
    }

    pub fn is_nilpotent(&self, a: &Elem) -> bool {
        self.nilpotent_order(a).is_some()
    }

    // ---- finiteness and structure -------------------------------------------------

    pub fn is_finite(&self) -> bool {
        match &self.inner.kind {
            Kind::Int => false,
            Kind::Zmod { .. } => true,
            Kind::Quotient { base, .. } => base.is_finite(),
        }
    }

    /// Number of elements, `None` for infinite rings or when it overflows `u128`.
    pub fn size(&self) -> Option<u128> {
        match &self.inner.kind {
            Kind::Int => None,
            Kind::Zmod { n, .. } => Some(*n as u128),
            Kind::Quotient { base, modulus, .. } => {
                let b = base.size()?;
                let mut acc: u128 = 1;
                for _ in 0..modulus.len() - 1 {
                    acc = acc.checked_mul(b)?;
                }
                Some(acc)
            }
        }
    }

    /// All elements in canonical (lexicographic payload) order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let size = self
            .size()
            .ok_or_else(|| Error::RingNotFinite(self.describe()))?;
        if size > MAX_ENUMERATED {
            return Err(Error::DomainTooLarge(format!("{} has {size} elements", self.describe())));
        }
        Ok(match &self.inner.kind {
            Kind::Int => unreachable!(),
            Kind::Zmod { n, .. } => (0..*n).map(Elem::Mod).collect(),
            Kind::Quotient { base, modulus, .. } => {
                let be = base.elements()?;
                let d = modulus.len() - 1;
                let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
                for _ in 0..d {
                    let mut next = Vec::with_capacity(out.len() * be.len());
                    for prefix in &out {
                        for b in &be {
                            let mut v = prefix.clone();
                            v.push(b.clone());
                            next.push(v);
                        }
                    }
                    out = next;
                }
                out.into_iter().map(Elem::Poly).collect()
            }
        })
    }

    /// All idempotents, sorted.
    pub fn idempotents(&self) -> Result<Vec<Elem>> {
        match &self.inner.kind {
            Kind::Int => Ok(vec![self.zero(), self.one()]),
            Kind::Zmod { n, factors } => {
                let prims = crt_idempotents(*n, factors);
                let mut out = Vec::with_capacity(1 << prims.len());
                for mask in 0u32..(1 << prims.len()) {
                    let mut e = 0u64;
                    for (k, p) in prims.iter().enumerate() {
                        if mask & (1 << k) != 0 {
                            e = (e + p) % n;
                        }
                    }
                    out.push(Elem::Mod(e));
                }
                out.sort();
                Ok(out)
            }
            Kind::Quotient { .. } => {
                if !self.is_finite() {
                    if let Some(f) = self.facts() {
                        if f.is_connected {
                            return Ok(vec![self.zero(), self.one()]);
                        }
                    }
                    return Err(Error::Unsupported(format!(
                        "idempotents of the infinite ring {} need factorisation data",
                        self.describe()
                    )));
                }
                let els = self.elements()?;
                Ok(els.into_iter().filter(|e| self.mul(e, e) == *e).collect())
            }
        }
    }

    /// Idempotents cutting out the local factors of a finite ring (they sum to one).
    pub fn primitive_idempotents(&self) -> Result<Vec<Elem>> {
        if let Kind::Zmod { n, factors } = &self.inner.kind {
            let mut v: Vec<Elem> = crt_idempotents(*n, factors).into_iter().map(Elem::Mod).collect();
            v.sort();
            return Ok(v);
        }
        if !self.is_finite() {
            return Err(Error::RingNotFinite(self.describe()));
        }
        let all = self.idempotents()?;
        let nonzero: Vec<&Elem> = all.iter().filter(|e| !self.is_zero(e)).collect();
        let prims = nonzero
            .iter()
            .filter(|&&e| {
                nonzero
                    .iter()
                    .all(|&f| f == e || self.mul(f, e) != *f)
            })
            .map(|&e| e.clone())
            .collect();
        Ok(prims)
    }

    /// Connectedness: decided for finite rings and `Z`, otherwise taken from asserted facts.
    pub fn is_connected(&self) -> Result<bool> {
        Ok(self.idempotents()?.len() == 2)
    }

    /// Locality. Finite rings are local iff connected; infinite supported rings
    /// all contain `Z` or a quotient of it with two comaximal non-units.
    pub fn is_local(&self) -> Result<bool> {
        if self.is_finite() {
            Ok(self.primitive_idempotents()?.len() == 1)
        } else {
            Ok(false)
        }
    }

    // ---- flattening to a free module over Z or Z/n ------------------------------

    /// `(modulus of the scalar ring or None for Z, rank)` of the underlying free module.
    pub fn flat_shape(&self) -> (Option<u64>, usize) {
        match &self.inner.kind {
            Kind::Int => (None, 1),
            Kind::Zmod { n, .. } => (Some(*n), 1),
            Kind::Quotient { base, modulus, .. } => {
                let (s, r) = base.flat_shape();
                (s, r * (modulus.len() - 1))
            }
        }
    }

    /// Coordinates of `a` in the monomial basis over the scalar ring.
    pub fn to_flat(&self, a: &Elem) -> Vec<BigInt> {
        match a {
            Elem::Int(x) => vec![x.clone()],
            Elem::Mod(x) => vec![BigInt::from(*x)],
            Elem::Poly(c) => {
                let base = self.base().expect("poly payload outside quotient ring");
                c.iter().flat_map(|x| base.to_flat(x)).collect()
            }
        }
    }

    pub fn from_flat(&self, v: &[BigInt]) -> Elem {
        match &self.inner.kind {
            Kind::Int | Kind::Zmod { .. } => self.from_bigint(&v[0]),
            Kind::Quotient { base, modulus, .. } => {
                let r = base.flat_shape().1;
                Elem::Poly((0..modulus.len() - 1).map(|j| base.from_flat(&v[j * r..(j + 1) * r])).collect())
            }
        }
    }

    /// Monomial basis matching [`Ring::to_flat`].
    pub fn flat_basis(&self) -> Vec<Elem> {
        let (_, r) = self.flat_shape();
        (0..r)
            .map(|k| {
                let mut v = vec![BigInt::zero(); r];
                v[k] = BigInt::one();
                self.from_flat(&v)
            })
            .collect()
    }

    // ---- display ------------------------------------------------------------------

    /// Human-readable rendering of an element.
    pub fn show(&self, a: &Elem) -> String {
        match (&self.inner.kind, a) {
            (Kind::Int, Elem::Int(x)) => x.to_string(),
            (Kind::Zmod { .. }, Elem::Mod(x)) => x.to_string(),
            (Kind::Quotient { base, var, .. }, Elem::Poly(c)) => {
                let mut out = String::new();
                for (k, x) in c.iter().enumerate() {
                    if base.is_zero(x) {
                        continue;
                    }
                    let mut coef = base.show(x);
                    let compound = base.base().is_some() && coef.contains(['+', '-']);
                    if compound {
                        coef = format!("({coef})");
                    }
                    let mono = match k {
                        0 => String::new(),
                        1 => var.clone(),
                        _ => format!("{var}^{k}"),
                    };
                    let term = if k == 0 {
                        coef
                    } else if base.is_one(x) {
                        mono
                    } else if coef == "-1" {
                        format!("-{mono}")
                    } else {
                        format!("{coef}*{mono}")
                    };
                    if !out.is_empty() && !term.starts_with('-') {
                        out.push('+');
                    }
                    out.push_str(&term);
                }
                if out.is_empty() {
                    "0".into()
                } else {
                    out
                }
            }
            _ => format!("{a:?}"),
        }
    }

    /// Wraps a payload into a self-contained value.
    pub fn value(&self, e: Elem) -> RingValue {
        RingValue { ring: self.clone(), elem: e }
    }
}

/// Primitive CRT idempotents of `Z/n`, one per prime-power factor.
fn crt_idempotents(n: u64, factors: &[(u64, u32)]) -> Vec<u64> {
    factors
        .iter()
        .map(|&(p, e)| {
            let q = p.pow(e);
            let r = n / q;
            // e = r * (r^-1 mod q): 1 mod q, 0 mod r
            let inv = mod_inverse(r % q, q).unwrap_or(0);
            ((r as u128 * inv as u128) % n as u128) as u64
        })
        .collect()
}

/// A ring element bundled with its ring, with operator overloads.
#[derive(Clone, PartialEq, Eq)]
pub struct RingValue {
    pub ring: Ring,
    pub elem: Elem,
}

impl fmt::Debug for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.show(&self.elem))
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.show(&self.elem))
    }
}

impl RingValue {
    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.elem)
    }

    pub fn try_invert(&self) -> Option<RingValue> {
        self.ring.try_invert(&self.elem).map(|e| self.ring.value(e))
    }

    pub fn nilpotent_order(&self) -> Option<u64> {
        self.ring.nilpotent_order(&self.elem)
    }

    pub fn pow(&self, e: u64) -> RingValue {
        self.ring.value(self.ring.pow(&self.elem, e))
    }
}

macro_rules! value_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for &RingValue {
            type Output = RingValue;
            fn $method(self, rhs: &RingValue) -> RingValue {
                assert!(self.ring == rhs.ring, "ring mismatch");
                self.ring.value(self.ring.$method(&self.elem, &rhs.elem))
            }
        }
        impl $tr for RingValue {
            type Output = RingValue;
            fn $method(self, rhs: RingValue) -> RingValue {
                (&self).$method(&rhs)
            }
        }
    };
}

value_binop!(Add, add);
value_binop!(Sub, sub);
value_binop!(Mul, mul);

impl Neg for &RingValue {
    type Output = RingValue;
    fn neg(self) -> RingValue {
        self.ring.value(self.ring.neg(&self.elem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::zmod(n).unwrap()
    }

    fn zsqrt5() -> Ring {
        Ring::quotient(&Ring::integers(), "x", &[5, 0, 1]).unwrap()
    }

    #[test]
    fn modular_arithmetic() {
        let r = z(4);
        assert_eq!(r.add(&r.from_i64(1), &r.from_i64(3)), r.zero());
        assert_eq!(r.elements().unwrap().len(), 4);
    }

    #[test]
    fn quotient_generator_squares_to_minus_five() {
        let k = zsqrt5();
        let x = k.generator().unwrap();
        assert_eq!(k.mul(&x, &x), k.from_i64(-5));
        assert_eq!(k.describe(), "Z[x]/(x^2+5)");
    }

    #[test]
    fn malformed_specs() {
        assert!(matches!(Ring::zmod(1), Err(Error::MalformedSpec(_))));
        assert!(matches!(Ring::zmod(0), Err(Error::MalformedSpec(_))));
        assert!(matches!(
            Ring::quotient(&Ring::integers(), "x", &[5, 0, 2]),
            Err(Error::MalformedSpec(_))
        ));
        assert!(matches!(Ring::quotient(&Ring::integers(), "x", &[1]), Err(Error::MalformedSpec(_))));
    }

    #[test]
    fn inverses() {
        let r = z(4);
        assert_eq!(r.try_invert(&r.from_i64(3)), Some(r.from_i64(3)));
        assert_eq!(r.try_invert(&r.from_i64(2)), None);
        let r7 = z(7);
        assert_eq!(r7.try_invert(&r7.from_i64(5)), Some(r7.from_i64(3)));
        let k = zsqrt5();
        assert_eq!(k.try_invert(&k.from_i64(2)), None);
        assert_eq!(k.try_invert(&k.from_i64(-1)), Some(k.from_i64(-1)));
        let x = k.generator().unwrap();
        assert_eq!(k.try_invert(&x), None);
    }

    #[test]
    fn quotient_inverse_over_integers() {
        // Z[x]/(x^2 - 2): 1 + x has norm -1, inverse -1 + x
        let k = Ring::quotient(&Ring::integers(), "x", &[-2, 0, 1]).unwrap();
        let a = k.from_coeffs(&[Elem::Int(1.into()), Elem::Int(1.into())]).unwrap();
        let inv = k.try_invert(&a).unwrap();
        assert!(k.is_one(&k.mul(&a, &inv)));
        assert_eq!(k.show(&inv), "-1+x");
    }

    #[test]
    fn nilpotent_orders() {
        let r4 = z(4);
        assert_eq!(r4.nilpotent_order(&r4.from_i64(2)), Some(2));
        assert_eq!(r4.nilpotent_order(&r4.from_i64(3)), None);
        let r8 = z(8);
        assert_eq!(r8.nilpotent_order(&r8.from_i64(2)), Some(3));
        let zz = Ring::integers();
        assert_eq!(zz.nilpotent_order(&zz.from_i64(0)), Some(1));
        assert_eq!(zz.nilpotent_order(&zz.from_i64(7)), None);
        // Z[t]/(t^2): t nilpotent of order 2
        let dual = Ring::quotient(&zz, "t", &[0, 0, 1]).unwrap();
        assert_eq!(dual.nilpotent_order(&dual.generator().unwrap()), Some(2));
    }

    #[test]
    fn idempotent_lists() {
        let show = |r: &Ring| -> Vec<String> { r.idempotents().unwrap().iter().map(|e| r.show(e)).collect() };
        assert_eq!(show(&z(4)), ["0", "1"]);
        assert_eq!(show(&z(6)), ["0", "1", "3", "4"]);
        assert_eq!(show(&z(2)), ["0", "1"]);
        assert_eq!(show(&Ring::f4()), ["0", "1"]);
        assert!(z(4).is_connected().unwrap());
        assert!(!z(6).is_connected().unwrap());
        assert!(matches!(zsqrt5().idempotents(), Err(Error::Unsupported(_))));
        // F_2[y]/(y^2 + y) = F_2 x F_2
        let split = Ring::quotient(&z(2), "y", &[0, 1, 1]).unwrap();
        assert_eq!(split.idempotents().unwrap().len(), 4);
        assert_eq!(split.primitive_idempotents().unwrap().len(), 2);
    }

    #[test]
    fn facts_are_validated() {
        let spec = RingSpec::Modular(6);
        let bad = RingFacts { is_connected: true, jacobson_hint: vec![] };
        assert!(Ring::with_facts(spec, bad).is_err());
        let k = Ring::with_facts(
            zsqrt5().spec().clone(),
            RingFacts { is_connected: true, jacobson_hint: vec![] },
        )
        .unwrap();
        assert!(k.is_connected().unwrap());
    }

    #[test]
    fn finite_field_of_four() {
        let f4 = Ring::f4();
        let els = f4.elements().unwrap();
        assert_eq!(els.len(), 4);
        for e in &els {
            if !f4.is_zero(e) {
                assert!(f4.is_unit(e));
            }
        }
        assert_eq!(f4.nil_bound(), 2);
    }

    #[test]
    fn flat_round_trip() {
        let f4t = Ring::quotient(&Ring::f4(), "t", &[0, 0, 1]).unwrap();
        assert_eq!(f4t.flat_shape(), (Some(2), 4));
        for e in f4t.elements().unwrap() {
            assert_eq!(f4t.from_flat(&f4t.to_flat(&e)), e);
        }
    }

    #[test]
    fn exhaustive_unit_and_nilpotent_laws() {
        let rings = [z(4), z(8), z(9), z(12), Ring::f4(), Ring::quotient(&Ring::f4(), "t", &[0, 0, 1]).unwrap()];
        for r in &rings {
            let els = r.elements().unwrap();
            for a in &els {
                let inv = r.try_invert(a);
                if let Some(b) = &inv {
                    assert!(r.is_one(&r.mul(a, b)));
                } else {
                    assert!(els.iter().all(|b| !r.is_one(&r.mul(a, b))), "missed inverse in {}", r.describe());
                }
                if let Some(e) = r.nilpotent_order(a) {
                    assert!(r.is_zero(&r.pow(a, e)));
                    assert!(e == 1 || !r.is_zero(&r.pow(a, e - 1)));
                    assert!(inv.is_none());
                } else {
                    assert!(!r.is_zero(&r.pow(a, 64)));
                }
            }
        }
    }

    #[test]
    fn local_rings_have_local_sums() {
        for r in [z(4), z(8), z(9), Ring::f4(), z(5)] {
            assert!(r.is_local().unwrap());
            let els = r.elements().unwrap();
            for a in &els {
                for b in &els {
                    if r.is_unit(&r.add(a, b)) {
                        assert!(r.is_unit(a) || r.is_unit(b));
                    }
                }
            }
        }
        assert!(!z(6).is_local().unwrap());
    }
}
