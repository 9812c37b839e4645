//! Ordinals below ε₀ in Cantor normal form.
//!
//! Text syntax: `0`, naturals, `w`, `w^<exp>`, `<term>*<nat>` and sums with
//! `+`, e.g. `w^(w^1*2)*3 + w*1 + 2`. Sums are ordinary ordinal sums, so
//! `1 + w` reads as `w`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// `ω^α₁·n₁ + … + ω^αₖ·nₖ` with `α₁ > … > αₖ` and every `nᵢ ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("ordinal syntax error at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("terms are not strictly decreasing or a coefficient is zero")]
    NotCanonical,
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Ordinal {
        Ordinal::nat(1)
    }

    pub fn omega() -> Ordinal {
        omega_pow(Ordinal::one())
    }

    pub fn nat(n: u64) -> Ordinal {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), n)] }
        }
    }

    /// Builds from `(exponent, coefficient)` pairs, which must already be in
    /// Cantor normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Ordinal, OrdinalError> {
        let ok = terms.iter().all(|(_, c)| *c > 0)
            && terms.windows(2).all(|w| w[0].0 > w[1].0);
        if ok {
            Ok(Ordinal { terms })
        } else {
            Err(OrdinalError::NotCanonical)
        }
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    /// Ordinary (non-commutative) ordinal sum.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some((lead, _)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> =
            self.terms.iter().take_while(|(e, _)| e > lead).cloned().collect();
        let mut rest = other.terms.iter();
        if let Some((e, c)) = self.terms.iter().find(|(e, _)| e == lead) {
            let (_, d) = rest.next().expect("nonempty");
            terms.push((e.clone(), checked(c, d)));
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// Nesting depth of exponents; 0 for naturals.
    pub fn height(&self) -> usize {
        self.terms.iter().map(|(e, _)| if e.is_zero() { 0 } else { 1 + e.height() }).max().unwrap_or(0)
    }
}

fn checked(a: &u64, b: &u64) -> u64 {
    a.checked_add(*b).expect("ordinal coefficient overflow")
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Ordinal) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Ordinal) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

/// Natural sum: merges like exponents, adding coefficients.
pub fn hessenberg_sum(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let mut terms = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        let (x, y) = (&a.terms[i], &b.terms[j]);
        match x.0.cmp(&y.0) {
            Ordering::Greater => {
                terms.push(x.clone());
                i += 1;
            }
            Ordering::Less => {
                terms.push(y.clone());
                j += 1;
            }
            Ordering::Equal => {
                terms.push((x.0.clone(), checked(&x.1, &y.1)));
                i += 1;
                j += 1;
            }
        }
    }
    terms.extend(a.terms[i..].iter().cloned());
    terms.extend(b.terms[j..].iter().cloned());
    Ordinal { terms }
}

/// `a ⊕ … ⊕ a`, `n` times.
pub fn hessenberg_nprod(a: &Ordinal, n: u64) -> Ordinal {
    if n == 0 {
        return Ordinal::zero();
    }
    let terms = a
        .terms
        .iter()
        .map(|(e, c)| (e.clone(), c.checked_mul(n).expect("ordinal coefficient overflow")))
        .collect();
    Ordinal { terms }
}

/// `ω^a`.
pub fn omega_pow(a: Ordinal) -> Ordinal {
    Ordinal { terms: vec![(a, 1)] }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            f.write_str("w")?;
            if *e != Ordinal::one() {
                if e.as_nat().is_some() {
                    write!(f, "^{e}")?;
                } else if *e == Ordinal::omega() {
                    f.write_str("^w")?;
                } else {
                    write!(f, "^({})", e.compact())?;
                }
            }
            if *c != 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl Ordinal {
    /// Display form without spaces.
    pub fn compact(&self) -> String {
        self.to_string().replace(' ', "")
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, OrdinalError> {
        Err(OrdinalError::Syntax(self.pos, msg.into()))
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .or_else(|_| self.err("natural too large"))
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        let base = match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.atom()?
                } else {
                    Ordinal::one()
                };
                omega_pow(exp)
            }
            Some(b'(') => self.atom()?,
            Some(c) if c.is_ascii_digit() => Ordinal::nat(self.nat()?),
            _ => return self.err("expected an ordinal term"),
        };
        if self.peek() == Some(b'*') {
            self.pos += 1;
            let n = self.nat()?;
            return Ok(times_nat(&base, n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let o = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(o)
            }
            Some(b'w') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    return Ok(omega_pow(self.atom()?));
                }
                Ok(Ordinal::omega())
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            _ => self.err("expected an exponent"),
        }
    }
}

/// Ordinal product `a·n` for a natural `n`.
fn times_nat(a: &Ordinal, n: u64) -> Ordinal {
    if n == 0 || a.is_zero() {
        return Ordinal::zero();
    }
    let mut terms = a.terms.clone();
    terms[0].1 = terms[0].1.checked_mul(n).expect("ordinal coefficient overflow");
    Ordinal { terms }
}

impl std::str::FromStr for Ordinal {
    type Err = OrdinalError;
    fn from_str(s: &str) -> Result<Ordinal, OrdinalError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let o = p.sum()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(o)
    }
}
