//! Random and exhaustive generators for terms, ordinals and valid proofs.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{ord_of_proof, reverse_proof, ConvKind, ProofNode, HOLE};
use crate::ordinals::{hessenberg_sum, omega_pow, Ordinal};
use crate::reduction::head::{probe, Probe};
use crate::term::{church, i, k, k_star, omega_big, Name, Term};

const HINTS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn hint(depth: u32) -> Name {
    HINTS[depth as usize % HINTS.len()].into()
}

/// Number of terms of `size` nodes whose loose indices are below `k`.
/// Variables, abstractions and applications each count one node.
pub fn term_count(size: usize, k: u32) -> u128 {
    let mut memo = std::collections::HashMap::new();
    count(size, k, &mut memo)
}

fn count(size: usize, k: u32, memo: &mut std::collections::HashMap<(usize, u32), u128>) -> u128 {
    if size == 0 {
        return 0;
    }
    if size == 1 {
        return k as u128;
    }
    if let Some(&c) = memo.get(&(size, k)) {
        return c;
    }
    let mut c = count(size - 1, k + 1, memo);
    for a in 1..size - 1 {
        let left = count(a, k, memo);
        if left > 0 {
            c = c.saturating_add(left.saturating_mul(count(size - 1 - a, k, memo)));
        }
    }
    memo.insert((size, k), c);
    c
}

/// Every closed term with exactly `size` nodes.
pub fn closed_terms_of_size(size: usize) -> Vec<Term> {
    terms_of(size, 0)
}

fn terms_of(size: usize, k: u32) -> Vec<Term> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    if size == 1 {
        out.extend((0..k).map(Term::bound));
        return out;
    }
    out.extend(terms_of(size - 1, k + 1).into_iter().map(|b| Term::lam_raw(hint(k), b)));
    for a in 1..size - 1 {
        let fs = terms_of(a, k);
        if fs.is_empty() {
            continue;
        }
        let xs = terms_of(size - 1 - a, k);
        for f in &fs {
            for x in &xs {
                out.push(Term::app(f.clone(), x.clone()));
            }
        }
    }
    out
}

/// A closed term of exactly `size` nodes, uniformly among all of them.
/// `size` must be at least 2.
pub fn uniform_closed_term<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Term {
    assert!(size >= 2, "no closed term of size {size}");
    let mut memo = std::collections::HashMap::new();
    sample(rng, size, 0, &mut memo)
}

fn sample<R: Rng + ?Sized>(
    rng: &mut R,
    size: usize,
    k: u32,
    memo: &mut std::collections::HashMap<(usize, u32), u128>,
) -> Term {
    if size == 1 {
        return Term::bound(rng.gen_range(0..k));
    }
    let total = count(size, k, memo);
    let mut pick = rng.gen_range(0..total);
    let lam = count(size - 1, k + 1, memo);
    if pick < lam {
        return Term::lam_raw(hint(k), sample(rng, size - 1, k + 1, memo));
    }
    pick -= lam;
    for a in 1..size - 1 {
        let c = count(a, k, memo).saturating_mul(count(size - 1 - a, k, memo));
        if pick < c {
            let f = sample(rng, a, k, memo);
            let x = sample(rng, size - 1 - a, k, memo);
            return Term::app(f, x);
        }
        pick -= c;
    }
    unreachable!("pick below total")
}

/// A closed term with between 2 and `max_size` nodes, the size drawn
/// uniformly.
pub fn random_closed_term<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> Term {
    let size = rng.gen_range(2..=max_size.max(2));
    uniform_closed_term(rng, size)
}

/// An ordinal below `ω^ω^…` with `height` levels of exponents: height 0 gives
/// naturals, height 2 stays below `ω^ω^ω`.
pub fn random_ordinal<R: Rng + ?Sized>(rng: &mut R, height: usize) -> Ordinal {
    let n = rng.gen_range(0..=3);
    let mut exps: Vec<Ordinal> = (0..n)
        .map(|_| if height == 0 { Ordinal::zero() } else { random_ordinal(rng, height - 1) })
        .collect();
    exps.sort_by(|a, b| b.cmp(a));
    exps.dedup();
    let terms = exps.into_iter().map(|e| (e, rng.gen_range(1..=4))).collect();
    Ordinal::from_terms(terms).expect("sorted distinct exponents")
}

/// Shape limits for [`random_proof`].
#[derive(Clone, Debug)]
pub struct ProofShape {
    pub max_depth: usize,
    pub max_oracles: usize,
    /// Largest starting term.
    pub term_size: usize,
    /// Probe fuel for choosing Ω-axioms.
    pub probe_fuel: usize,
}

impl Default for ProofShape {
    fn default() -> ProofShape {
        ProofShape { max_depth: 6, max_oracles: 4, term_size: 8, probe_fuel: 64 }
    }
}

fn small_closed<R: Rng + ?Sized>(rng: &mut R) -> Term {
    let lib = [i(), k(), k_star(), church(0), church(1)];
    if rng.gen_bool(0.6) {
        lib.choose(rng).expect("nonempty").clone()
    } else {
        random_closed_term(rng, 5)
    }
}

fn start_term<R: Rng + ?Sized>(rng: &mut R, shape: &ProofShape) -> Term {
    match rng.gen_range(0..4) {
        0 => Term::app(small_closed(rng), small_closed(rng)),
        1 => Term::app(omega_big(), small_closed(rng)),
        _ => random_closed_term(rng, shape.term_size),
    }
}

/// `a = b` and `b = c` give `a = c`.
pub fn trans(ab: ProofNode, bc: ProofNode) -> ProofNode {
    let (a, b) = ab.conclusion();
    let (_, c) = bc.conclusion();
    ProofNode::leibnitz(a, Term::var(HOLE), b, c, ab, bc)
}

struct Gen<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    shape: &'a ProofShape,
    oracles: usize,
}

impl<R: Rng + ?Sized> Gen<'_, R> {
    /// A valid proof of `s = _` with depth at most `depth`.
    fn proof(&mut self, s: &Term, depth: usize) -> ProofNode {
        if depth >= 3 && self.oracles > 0 && self.rng.gen_bool(0.25) {
            return self.oracle(s, depth);
        }
        if depth >= 2 && self.rng.gen_bool(0.6) {
            return if self.rng.gen_bool(0.5) { self.transitivity(s, depth) } else { self.congruence(s, depth) };
        }
        if depth >= 2 && self.oracles > 0 && self.rng.gen_bool(0.3) {
            return self.oracle(s, depth);
        }
        self.axiom(s)
    }

    fn axiom(&mut self, s: &Term) -> ProofNode {
        let mut options: Vec<ProofNode> = vec![ProofNode::Identity(s.clone())];
        let expand = |rhs: Term| ProofNode::WeakConv { lhs: s.clone(), rhs, kind: ConvKind::BetaExpand, cert: None };
        options.push(expand(Term::app(i(), s.clone())));
        let a = small_closed(self.rng);
        options.push(expand(Term::app(Term::lam("v", s.clone()), a)));
        if s.is_beta_redex() {
            let c = ProofNode::WeakConv { lhs: s.clone(), rhs: s.contract(), kind: ConvKind::BetaContract, cert: None };
            options.extend([c.clone(), c]);
        }
        if s.is_omega() {
            let m = Term::app(omega_big(), small_closed(self.rng));
            options.push(ProofNode::WeakConv { lhs: s.clone(), rhs: m, kind: ConvKind::FromOmega, cert: None });
        } else if s.size() < 200 && matches!(probe(s, self.shape.probe_fuel), Probe::Cycle(_)) {
            let to = ProofNode::WeakConv { lhs: s.clone(), rhs: omega_big(), kind: ConvKind::ToOmega, cert: None };
            options.extend([to.clone(), to]);
        }
        options.swap_remove(self.rng.gen_range(0..options.len()))
    }

    fn transitivity(&mut self, s: &Term, depth: usize) -> ProofNode {
        let left = self.proof(s, depth - 1);
        let (_, m) = left.conclusion();
        let right = self.proof(&m, depth - 1);
        trans(left, right)
    }

    /// `C[M] = C[N]` from `M = N` at a closed proper subterm `M`.
    fn congruence(&mut self, s: &Term, depth: usize) -> ProofNode {
        let mut paths = Vec::new();
        closed_positions(s, &mut Vec::new(), &mut paths);
        let Some(path) = paths.choose(self.rng).cloned() else {
            return self.transitivity(s, depth);
        };
        let m = s.at(&path).expect("position").clone();
        let y = s.replace_at(&path, |_| Term::var(HOLE)).expect("position");
        let right = self.proof(&m, depth - 1);
        let (_, n) = right.conclusion();
        ProofNode::leibnitz(s.clone(), y, m, n, ProofNode::Identity(s.clone()), right)
    }

    /// `S = λx.S x` with a few samples `S A = (λx.S x) A`.
    fn oracle(&mut self, s: &Term, depth: usize) -> ProofNode {
        self.oracles -= 1;
        let q = Term::lam("x", Term::app(s.clone(), Term::var("x")));
        let n = self.rng.gen_range(0..=3);
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            let a = small_closed(self.rng);
            let (sa, qa) = (Term::app(s.clone(), a.clone()), Term::app(q.clone(), a));
            let expand = ProofNode::WeakConv { lhs: sa.clone(), rhs: qa, kind: ConvKind::BetaExpand, cert: None };
            // A detour through a nested proof and back, when depth allows.
            let sample = if depth >= 4 && self.rng.gen_bool(0.5) {
                // The way back repeats every ω-rule node of the way there.
                let budget = self.oracles;
                self.oracles = budget / 2;
                let there = self.proof(&sa, depth - 3);
                self.oracles = budget - 2 * (budget / 2 - self.oracles);
                let back = reverse_proof(&there);
                trans(trans(there, back), expand)
            } else {
                expand
            };
            samples.push(sample);
        }
        let sum = samples
            .iter()
            .map(|s| ord_of_proof(s).expect("generated samples carry bounds"))
            .fold(Ordinal::zero(), |a, b| hessenberg_sum(&a, &b));
        let bound = match self.rng.gen_range(0..3) {
            0 => hessenberg_sum(&sum, &Ordinal::one()),
            1 => hessenberg_sum(&sum, &Ordinal::nat(self.rng.gen_range(1..=3))),
            _ => hessenberg_sum(&sum, &omega_pow(Ordinal::nat(self.rng.gen_range(0..=2)))),
        };
        ProofNode::Oracle { p: s.clone(), q, samples, bound: Some(bound), justification: "eta".into() }
    }
}

fn closed_positions(t: &Term, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if !path.is_empty() && t.is_closed() {
        out.push(path.clone());
    }
    use crate::term::Kind;
    match t.kind() {
        Kind::Lam(_, b) => {
            path.push(0);
            closed_positions(b, path, out);
            path.pop();
        }
        Kind::App(f, a) => {
            path.push(0);
            closed_positions(f, path, out);
            path.pop();
            path.push(1);
            closed_positions(a, path, out);
            path.pop();
        }
        _ => {}
    }
}

/// A random valid proof whose depth and ω-rule count respect `shape`.
pub fn random_proof<R: Rng + ?Sized>(rng: &mut R, shape: &ProofShape) -> ProofNode {
    let s = start_term(rng, shape);
    let mut g = Gen { rng, shape, oracles: shape.max_oracles };
    g.proof(&s, shape.max_depth)
}
