//! Untyped λ-terms.
//!
//! Terms are immutable and shared. Free variables are names, bound variables
//! are de Bruijn indices, and every abstraction keeps the name it was written
//! with so that printing can reuse it. Each node caches a structural hash that
//! ignores binder names, so `==` is α-equivalence and `HashMap<Term, _>` works
//! modulo α.

mod library;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use library::*;
pub use parse::{parse, ParseError};

/// A variable or binder name.
pub type Name = Arc<str>;

/// An untyped λ-term. Cloning is cheap.
#[derive(Clone)]
pub struct Term(Arc<Node>);

pub(crate) struct Node {
    kind: Kind,
    hash: u64,
    size: u32,
    /// One more than the largest index that escapes this node, 0 if none.
    loose: u32,
    /// Bloom filter over free names.
    names: u64,
    /// Number of β-redexes / number of closed β-redexes.
    redexes: u32,
    weak: u32,
}

pub(crate) enum Kind {
    Free(Name),
    Bound(u32),
    Lam(Name, Term),
    App(Term, Term),
}

/// Read-only view of a term, with abstractions opened on a fresh name.
#[derive(Clone, Debug)]
pub enum View<'a> {
    Var(&'a str),
    Lam(String, Term),
    App(&'a Term, &'a Term),
}

fn name_hash(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    splitmix(h)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn mix(a: u64, b: u64) -> u64 {
    splitmix(a.rotate_left(17) ^ b)
}

fn bloom(name: &str) -> u64 {
    1u64 << (name_hash(name) >> 58)
}

impl Term {
    fn mk(kind: Kind) -> Term {
        let node = match &kind {
            Kind::Free(n) => Node {
                hash: mix(1, name_hash(n)),
                size: 1,
                loose: 0,
                names: bloom(n),
                redexes: 0,
                weak: 0,
                kind,
            },
            Kind::Bound(k) => Node {
                hash: mix(2, *k as u64),
                size: 1,
                loose: k + 1,
                names: 0,
                redexes: 0,
                weak: 0,
                kind,
            },
            Kind::Lam(_, b) => Node {
                hash: mix(3, b.0.hash),
                size: b.0.size.saturating_add(1),
                loose: b.0.loose.saturating_sub(1),
                names: b.0.names,
                redexes: b.0.redexes,
                weak: b.0.weak,
                kind,
            },
            Kind::App(f, a) => {
                let loose = f.0.loose.max(a.0.loose);
                let names = f.0.names | a.0.names;
                let redex = matches!(f.kind(), Kind::Lam(..)) as u32;
                let weak = redex & (loose == 0 && names == 0) as u32;
                Node {
                    hash: mix(mix(4, f.0.hash), a.0.hash),
                    size: f.0.size.saturating_add(a.0.size).saturating_add(1),
                    loose,
                    names,
                    redexes: f.0.redexes.saturating_add(a.0.redexes).saturating_add(redex),
                    weak: f.0.weak.saturating_add(a.0.weak).saturating_add(weak),
                    kind,
                }
            }
        };
        Term(Arc::new(node))
    }

    /// The variable `name`.
    pub fn var(name: &str) -> Term {
        Term::mk(Kind::Free(name.into()))
    }

    /// `λname.body`, binding the free occurrences of `name` in `body`.
    pub fn lam(name: &str, body: Term) -> Term {
        let hint: Name = name.into();
        let body = body.abstract_name(name, bloom(name), 0);
        Term::mk(Kind::Lam(hint, body))
    }

    /// `λx₁ … xₙ.body`.
    pub fn lams(names: &[&str], body: Term) -> Term {
        names.iter().rev().fold(body, |b, n| Term::lam(n, b))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::mk(Kind::App(f, a))
    }

    /// Left-associated application `f a₁ … aₙ`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub(crate) fn bound(k: u32) -> Term {
        Term::mk(Kind::Bound(k))
    }

    pub(crate) fn lam_raw(hint: Name, body: Term) -> Term {
        Term::mk(Kind::Lam(hint, body))
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub(crate) fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    /// No free variables.
    pub fn is_closed(&self) -> bool {
        self.0.names == 0 && self.0.loose == 0
    }

    /// Number of β-redexes, saturating.
    pub fn redex_count(&self) -> usize {
        self.0.redexes as usize
    }

    /// Number of closed β-redexes, saturating.
    pub fn weak_redex_count(&self) -> usize {
        self.0.weak as usize
    }

    pub fn is_beta_redex(&self) -> bool {
        matches!(self.kind(), Kind::App(f, _) if matches!(f.kind(), Kind::Lam(..)))
    }

    pub fn is_app(&self) -> bool {
        matches!(self.kind(), Kind::App(..))
    }

    pub fn is_lam(&self) -> bool {
        matches!(self.kind(), Kind::Lam(..))
    }

    /// The name if this is a free variable.
    pub fn as_var(&self) -> Option<&str> {
        match self.kind() {
            Kind::Free(n) => Some(n),
            _ => None,
        }
    }

    /// `(f, a)` if this is an application.
    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            Kind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    /// Opens an abstraction on a name fresh for its body.
    pub fn as_lam(&self) -> Option<(String, Term)> {
        match self.kind() {
            Kind::Lam(hint, body) => {
                let used = body.free_vars();
                let name = fresh_name(hint, |n| used.contains(n));
                let opened = body.instantiate(&Term::var(&name));
                Some((name, opened))
            }
            _ => None,
        }
    }

    pub fn view(&self) -> View<'_> {
        match self.kind() {
            Kind::Free(n) => View::Var(n),
            Kind::Bound(_) => panic!("view of a term with a dangling index"),
            Kind::Lam(..) => {
                let (n, b) = self.as_lam().expect("abstraction");
                View::Lam(n, b)
            }
            Kind::App(f, a) => View::App(f, a),
        }
    }

    /// Head and arguments of the application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Kind::App(f, a) = t.kind() {
            args.push(a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        if self.0.names == 0 {
            return;
        }
        match self.kind() {
            Kind::Free(n) => {
                out.insert(n.to_string());
            }
            Kind::Bound(_) => {}
            Kind::Lam(_, b) => b.collect_free(out),
            Kind::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
        }
    }

    pub fn has_free(&self, name: &str) -> bool {
        if self.0.names & bloom(name) == 0 {
            return false;
        }
        match self.kind() {
            Kind::Free(n) => &**n == name,
            Kind::Bound(_) => false,
            Kind::Lam(_, b) => b.has_free(name),
            Kind::App(f, a) => f.has_free(name) || a.has_free(name),
        }
    }

    /// Capture-avoiding `[replacement/var]self`.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        self.subst_free(var, bloom(var), replacement, 0)
    }

    fn subst_free(&self, var: &str, bit: u64, repl: &Term, depth: u32) -> Term {
        if self.0.names & bit == 0 {
            return self.clone();
        }
        match self.kind() {
            Kind::Free(n) if &**n == var => repl.shift(depth, 0),
            Kind::Free(_) | Kind::Bound(_) => self.clone(),
            Kind::Lam(h, b) => {
                let nb = b.subst_free(var, bit, repl, depth + 1);
                if nb.ptr_eq(b) {
                    self.clone()
                } else {
                    Term::lam_raw(h.clone(), nb)
                }
            }
            Kind::App(f, a) => {
                let nf = f.subst_free(var, bit, repl, depth);
                let na = a.subst_free(var, bit, repl, depth);
                if nf.ptr_eq(f) && na.ptr_eq(a) {
                    self.clone()
                } else {
                    Term::app(nf, na)
                }
            }
        }
    }

    fn abstract_name(&self, var: &str, bit: u64, depth: u32) -> Term {
        if self.0.names & bit == 0 {
            return self.clone();
        }
        match self.kind() {
            Kind::Free(n) if &**n == var => Term::bound(depth),
            Kind::Free(_) | Kind::Bound(_) => self.clone(),
            Kind::Lam(h, b) => Term::lam_raw(h.clone(), b.abstract_name(var, bit, depth + 1)),
            Kind::App(f, a) => Term::app(
                f.abstract_name(var, bit, depth),
                a.abstract_name(var, bit, depth),
            ),
        }
    }

    /// Adds `d` to every index `>= cutoff` that escapes.
    pub(crate) fn shift(&self, d: u32, cutoff: u32) -> Term {
        if d == 0 || self.0.loose <= cutoff {
            return self.clone();
        }
        match self.kind() {
            Kind::Bound(k) => Term::bound(k + d),
            Kind::Free(_) => self.clone(),
            Kind::Lam(h, b) => Term::lam_raw(h.clone(), b.shift(d, cutoff + 1)),
            Kind::App(f, a) => Term::app(f.shift(d, cutoff), a.shift(d, cutoff)),
        }
    }

    /// Subtracts one from every escaping index `> 0`; index 0 must not escape.
    pub(crate) fn unshift(&self, cutoff: u32) -> Term {
        if self.0.loose <= cutoff {
            return self.clone();
        }
        match self.kind() {
            Kind::Bound(k) => Term::bound(k - 1),
            Kind::Free(_) => self.clone(),
            Kind::Lam(h, b) => Term::lam_raw(h.clone(), b.unshift(cutoff + 1)),
            Kind::App(f, a) => Term::app(f.unshift(cutoff), a.unshift(cutoff)),
        }
    }

    /// Replaces index `depth` by `arg` and lowers the indices above it.
    fn subst_bound(&self, depth: u32, arg: &Term) -> Term {
        if self.0.loose <= depth {
            return self.clone();
        }
        match self.kind() {
            Kind::Bound(k) if *k == depth => arg.shift(depth, 0),
            Kind::Bound(k) => Term::bound(k - 1),
            Kind::Free(_) => self.clone(),
            Kind::Lam(h, b) => Term::lam_raw(h.clone(), b.subst_bound(depth + 1, arg)),
            Kind::App(f, a) => Term::app(f.subst_bound(depth, arg), a.subst_bound(depth, arg)),
        }
    }

    /// The body of an abstraction with its bound variable replaced by `arg`.
    pub(crate) fn instantiate(&self, arg: &Term) -> Term {
        self.subst_bound(0, arg)
    }

    /// Contracts this β-redex. Panics if it is not one.
    pub(crate) fn contract(&self) -> Term {
        match self.kind() {
            Kind::App(f, a) => match f.kind() {
                Kind::Lam(_, b) => b.instantiate(a),
                _ => panic!("contract on a non-redex"),
            },
            _ => panic!("contract on a non-redex"),
        }
    }

    /// Does the escaping index `k` occur?
    pub(crate) fn mentions_index(&self, k: u32) -> bool {
        if self.0.loose <= k {
            return false;
        }
        match self.kind() {
            Kind::Bound(j) => *j == k,
            Kind::Free(_) => false,
            Kind::Lam(_, b) => b.mentions_index(k + 1),
            Kind::App(f, a) => f.mentions_index(k) || a.mentions_index(k),
        }
    }

    /// Subterm at `path`, possibly with escaping indices.
    pub(crate) fn at(&self, path: &[u8]) -> Option<&Term> {
        let mut t = self;
        for &i in path {
            t = match (t.kind(), i) {
                (Kind::Lam(_, b), 0) => b,
                (Kind::App(f, _), 0) => f,
                (Kind::App(_, a), 1) => a,
                _ => return None,
            };
        }
        Some(t)
    }

    /// Rebuilds the spine along `path` around `f(subterm)`.
    pub(crate) fn replace_at(&self, path: &[u8], f: impl FnOnce(&Term) -> Term) -> Option<Term> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(f(self));
        };
        match (self.kind(), i) {
            (Kind::Lam(h, b), 0) => Some(Term::lam_raw(h.clone(), b.replace_at(rest, f)?)),
            (Kind::App(g, a), 0) => Some(Term::app(g.replace_at(rest, f)?, a.clone())),
            (Kind::App(g, a), 1) => Some(Term::app(g.clone(), a.replace_at(rest, f)?)),
            _ => None,
        }
    }

    /// Subterm at `path` with the binders above it opened on display names.
    pub fn subterm(&self, path: &[u8]) -> Option<Term> {
        let mut t = self.clone();
        let mut used = self.free_vars();
        for &i in path {
            let next = match (t.kind(), i) {
                (Kind::Lam(h, b), 0) => {
                    let name = fresh_name(h, |n| used.contains(n));
                    used.insert(name.clone());
                    b.instantiate(&Term::var(&name))
                }
                (Kind::App(f, _), 0) => f.clone(),
                (Kind::App(_, a), 1) => a.clone(),
                _ => return None,
            };
            t = next;
        }
        Some(t)
    }

    /// Structural equality ignoring binder names.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other
    }
}

/// `hint`, or `hint` with primes appended, avoiding `taken`.
pub(crate) fn fresh_name(hint: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = if hint.is_empty() { "x".to_string() } else { hint.to_string() };
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// α-equivalence.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a == b
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        match (self.kind(), other.kind()) {
            (Kind::Free(a), Kind::Free(b)) => a == b,
            (Kind::Bound(a), Kind::Bound(b)) => a == b,
            (Kind::Lam(_, a), Kind::Lam(_, b)) => a == b,
            (Kind::App(f, a), Kind::App(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Drop for Node {
    // Long spines would otherwise recurse once per node on drop.
    fn drop(&mut self) {
        let mut stack = Vec::new();
        let take = |k: &mut Kind, stack: &mut Vec<Arc<Node>>| match std::mem::replace(k, Kind::Bound(0)) {
            Kind::Lam(_, b) => stack.push(b.0),
            Kind::App(f, a) => {
                stack.push(f.0);
                stack.push(a.0);
            }
            _ => {}
        };
        take(&mut self.kind, &mut stack);
        while let Some(node) = stack.pop() {
            if let Ok(mut n) = Arc::try_unwrap(node) {
                take(&mut n.kind, &mut stack);
            }
        }
    }
}

/// A position in a term: child indices from the root, `0` for the function
/// or the body, `1` for the argument.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<u8>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, i: u8) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("/"))
    }
}

impl std::str::FromStr for Path {
    type Err = String;
    fn from_str(s: &str) -> Result<Path, String> {
        if s.is_empty() {
            return Ok(Path::root());
        }
        s.split('/')
            .map(|p| match p {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => Err(format!("bad path component {p:?}")),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn alpha() {
        assert_eq!(p("\\x.x"), p("\\y.y"));
        assert_ne!(p("\\x.\\y.x"), p("\\x.\\y.y"));
        assert_eq!(theta(), p("(\\c d.d (c c d)) (\\e f.f (e e f))"));
    }

    #[test]
    fn substitution_avoids_capture() {
        let t = p("\\y.x").substitute("x", &Term::var("y"));
        assert_eq!(t.to_string(), "\\y'.y");
        assert_eq!(t.free_vars().into_iter().collect::<Vec<_>>(), vec!["y"]);
        assert_eq!(p("x").substitute("x", &i()), i());
        assert_eq!(p("\\y.y").substitute("x", &omega_big()), p("\\y.y"));
    }

    #[test]
    fn free_variables() {
        let fv = p("\\x.x y").free_vars();
        assert_eq!(fv.into_iter().collect::<Vec<_>>(), vec!["y"]);
        assert!(omega_big().is_closed());
        assert!(!p("\\x.y").is_closed());
    }

    #[test]
    fn cached_counts() {
        let t = p("\\y.(\\x.x) y ((\\x.x) $I)");
        assert_eq!(t.redex_count(), 2);
        assert_eq!(t.weak_redex_count(), 1);
        assert_eq!(omega_big().size(), 9);
    }

    #[test]
    fn paths() {
        let t = p("\\y.(\\x.x) y");
        assert_eq!(t.subterm(&[0, 1]).unwrap(), Term::var("y"));
        assert_eq!("0/1".parse::<Path>().unwrap(), Path(vec![0, 1]));
        assert_eq!(Path(vec![0, 1, 1]).to_string(), "0/1/1");
        assert!(t.subterm(&[1]).is_none());
    }

    #[test]
    fn deep_terms_drop_without_overflow() {
        let mut t = Term::var("x");
        for _ in 0..200_000 {
            t = Term::app(t, Term::var("y"));
        }
        drop(t);
    }
}
