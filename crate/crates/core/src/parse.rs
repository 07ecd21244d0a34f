//! Text syntax for polynomials and ring elements, e.g. `2+3X+2X^-2` or `(1+t)*X0^2*X1^-1`.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' ['-'] integer]
//! atom   := integer | name | '(' expr ')'
//! ```
//! Names are polynomial variables or generators of the coefficient ring.
//! Negative exponents are allowed on polynomial variables only.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::ring::{Elem, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            // letters then digits, so that `X0X1` reads as `X0 * X1`
            while i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} at {i}")));
        }
    }
    Ok(out)
}

/// Element of `ring` named by one of its adjoined variables.
pub fn ring_generator(ring: &Ring, name: &str) -> Option<Elem> {
    if ring.var_name() == Some(name) {
        return ring.generator();
    }
    let base = ring.base()?;
    ring_generator(base, name).map(|e| ring.from_base(&e))
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    like: &'a LaurentPoly,
}

enum Factor {
    Var(usize),
    Other(LaurentPoly),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let neg = self.eat('-');
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Name(_) | Tok::Sym('(')))
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            let explicit = self.eat('*');
            if !explicit && !self.starts_atom() {
                return Ok(acc);
            }
            acc = &acc * &self.factor()?;
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let atom = self.atom()?;
        let value = |a: &Factor| match a {
            Factor::Var(i) => self.like.var_like(*i),
            Factor::Other(p) => p.clone(),
        };
        if !self.eat('^') {
            return Ok(value(&atom));
        }
        let neg = self.eat('-');
        let k = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i64::try_from(n.clone()).map_err(|_| Error::Parse(format!("exponent {n} too large")))?
            }
            other => return Err(Error::Parse(format!("expected an exponent, found {other:?}"))),
        };
        match (atom, neg) {
            (Factor::Var(i), _) => {
                let mut e = vec![0; self.like.nvars()];
                e[i] = if neg { -k } else { k };
                Ok(self.like.monomial_like(e, self.like.ring().one()))
            }
            (Factor::Other(p), false) => Ok(p.pow(k as u64)),
            (Factor::Other(_), true) => Err(Error::Parse("negative exponents apply to polynomial variables only".into())),
        }
    }

    fn atom(&mut self) -> Result<Factor> {
        let ring = self.like.ring();
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Factor::Other(self.like.constant_like(ring.from_bigint(&n))))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if let Some(i) = self.like.vars().iter().position(|v| *v == name) {
                    return Ok(Factor::Var(i));
                }
                match ring_generator(ring, &name) {
                    Some(g) => Ok(Factor::Other(self.like.constant_like(g))),
                    None => Err(Error::Parse(format!("unknown name {name:?}"))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(Factor::Other(inner))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Variables named in `text` that are not ring generators, in natural order (`X2` before `X10`).
pub fn infer_vars(ring: &Ring, text: &str) -> Result<Vec<String>> {
    let mut names: Vec<String> = tokenize(text)?
        .into_iter()
        .filter_map(|t| match t {
            Tok::Name(n) if ring_generator(ring, &n).is_none() => Some(n),
            _ => None,
        })
        .collect();
    let key = |s: &String| {
        let split = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        (s[..split].to_string(), s[split..].parse::<u64>().ok(), s.clone())
    };
    names.sort_by_key(key);
    names.dedup();
    Ok(names)
}

/// Parses a polynomial in the given variables, or in the variables it mentions
/// (`X` when there are none).
pub fn parse_poly(ring: &Ring, text: &str, vars: Option<&[String]>) -> Result<LaurentPoly> {
    let vars = match vars {
        Some(v) => v.to_vec(),
        None => {
            let v = infer_vars(ring, text)?;
            if v.is_empty() {
                vec!["X".to_string()]
            } else {
                v
            }
        }
    };
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let like = LaurentPoly::zero(ring, &refs);
    let mut p = Parser { toks: tokenize(text)?, pos: 0, like: &like };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Parses an element of the ring itself, e.g. `1+t` in `Z/4[t]/(t^2)`.
pub fn parse_elem(ring: &Ring, text: &str) -> Result<Elem> {
    let p = parse_poly(ring, text, Some(&[]))?;
    Ok(p.constant_term())
}

/// Parses `Z`, `Z/n`, `F4` and towers such as `Z/4[t]/(t^2)` or `Z/2[t]/(t^2+t+1)[s]/(s^2)`.
pub fn parse_ring(text: &str) -> Result<Ring> {
    let text = text.trim();
    let (head, mut rest) = match text.find('[') {
        Some(k) => (text[..k].trim(), &text[k..]),
        None => (text, ""),
    };
    let mut ring = match head {
        "Z" => Ring::integers(),
        "F4" | "F_4" => Ring::f4(),
        _ => {
            let n = head
                .strip_prefix("Z/")
                .or_else(|| head.strip_prefix("F_"))
                .or_else(|| head.strip_prefix('F'))
                .and_then(|n| n.trim().parse::<u64>().ok())
                .ok_or_else(|| Error::MalformedSpec(format!("unknown ring {head:?}")))?;
            Ring::zmod(n)?
        }
    };
    while !rest.is_empty() {
        let close = rest.find(']').ok_or_else(|| Error::MalformedSpec("missing ']'".into()))?;
        let var = rest[1..close].trim().to_string();
        let after = rest[close + 1..].trim_start();
        let body = after.strip_prefix("/(").ok_or_else(|| Error::MalformedSpec("expected '/(' after ']'".into()))?;
        let mut depth = 1;
        let end = body
            .char_indices()
            .find(|&(_, c)| {
                depth += match c {
                    '(' => 1,
                    ')' => -1,
                    _ => 0,
                };
                depth == 0
            })
            .map(|(k, _)| k)
            .ok_or_else(|| Error::MalformedSpec("unbalanced parentheses".into()))?;
        let vars = [var.clone()];
        let f = parse_poly(&ring, &body[..end], Some(&vars)).map_err(|e| Error::MalformedSpec(e.to_string()))?;
        let deg = f.degree().filter(|_| f.is_polynomial()).ok_or_else(|| Error::MalformedSpec("bad modulus".into()))?;
        let modulus: Vec<Elem> = (0..=deg).map(|k| f.coeff_at(k)).collect();
        ring = Ring::new(crate::ring::RingSpec::Quotient { base: Box::new(ring.spec().clone()), var, modulus })?;
        rest = body[end + 1..].trim_start();
    }
    Ok(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_display() {
        let r = Ring::zmod(4).unwrap();
        for s in ["2+3X+2X^-2", "X0^-1*X1", "3+y1", "1", "0"] {
            let p = parse_poly(&r, s, None).unwrap();
            assert_eq!(parse_poly(&r, &p.to_string(), Some(p.vars())).unwrap(), p, "{s}");
        }
        let p = parse_poly(&r, "2+3X+2X^2", None).unwrap();
        assert_eq!(p, LaurentPoly::from_i64s(&r, &[2, 3, 2]));
    }

    #[test]
    fn implicit_products_and_parentheses() {
        let r = Ring::integers();
        let a = parse_poly(&r, "(1+X)(1-X)", None).unwrap();
        assert_eq!(a, LaurentPoly::from_i64s(&r, &[1, 0, -1]));
        let b = parse_poly(&r, "-2X^2 + 3 X", None).unwrap();
        assert_eq!(parse_poly(&r, "X0X1^2", None).unwrap().to_string(), parse_poly(&r, "X0*X1^2", None).unwrap().to_string());
        assert_eq!(b, LaurentPoly::from_i64s(&r, &[0, 3, -2]));
        assert!(matches!(parse_poly(&r, "(1+X)^-1", None), Err(Error::Parse(_))));
        assert!(matches!(parse_poly(&r, "1+", None), Err(Error::Parse(_))));
        assert!(matches!(parse_poly(&r, "X Y", Some(&["X".into()])), Err(Error::Parse(_))));
    }

    #[test]
    fn variable_inference() {
        let r = Ring::zmod(2).unwrap();
        assert_eq!(infer_vars(&r, "X10+X2*X0").unwrap(), ["X0", "X2", "X10"]);
        let q = parse_ring("Z/4[t]/(t^2)").unwrap();
        assert_eq!(infer_vars(&q, "t*X+1").unwrap(), ["X"]);
        let p = parse_poly(&q, "(1+t)X", None).unwrap();
        assert_eq!(p.coeff_at(1), parse_elem(&q, "t+1").unwrap());
    }

    #[test]
    fn rings() {
        assert_eq!(parse_ring("Z").unwrap(), Ring::integers());
        assert_eq!(parse_ring("Z/9").unwrap(), Ring::zmod(9).unwrap());
        assert_eq!(parse_ring("F4").unwrap(), Ring::f4());
        let r = parse_ring("Z/2[y]/(y^2+y+1)").unwrap();
        assert_eq!(r, Ring::f4());
        let s = parse_ring("Z[x]/(x^2+5)").unwrap();
        let x = parse_elem(&s, "x").unwrap();
        assert_eq!(s.mul(&x, &x), s.from_i64(-5));
        let tower = parse_ring("F4[s]/(s^2)").unwrap();
        assert_eq!(tower.size(), Some(16));
        assert!(parse_ring("Q").is_err());
    }
}
