//! The endpiece computation of a normal-form proof and its cascade test.

use super::normal::NormalForm;
use super::{ProofError, ProofNode};
use crate::reduction::{is_whnf, Engine, ReductionTrace, RuleTag, WhnfStatus};
use crate::term::{Kind, Term};

/// `from →* common *← to`.
#[derive(Clone, Debug)]
pub struct Stretch {
    pub from: Term,
    pub to: Term,
    pub common: Term,
    pub left: ReductionTrace,
    pub right: ReductionTrace,
}

/// `context P = context Q` by the ω-rule.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub context: Term,
    pub p: Term,
    pub q: Term,
}

/// `M →* R₁ *← M₁P₁ = M₁Q₁ →* R₂ *← … = MₜQₜ →* Rₜ₊₁ *← N`, with one more
/// stretch than rows.
#[derive(Clone, Debug)]
pub struct Endpiece {
    pub stretches: Vec<Stretch>,
    pub rows: Vec<OracleRow>,
}

impl Endpiece {
    pub fn start(&self) -> &Term {
        &self.stretches[0].from
    }

    pub fn end(&self) -> &Term {
        &self.stretches.last().expect("nonempty").to
    }

    /// Replays every trace and checks that stretches meet the rows.
    pub fn verify(&self) -> bool {
        let traces_ok = self.stretches.iter().all(|s| {
            s.left.start == s.from
                && s.right.start == s.to
                && s.left.end == s.common
                && s.right.end == s.common
                && s.left.replay(false).is_ok()
                && s.right.replay(false).is_ok()
        });
        let rows_ok = self.rows.iter().enumerate().all(|(i, r)| {
            self.stretches[i].to == Term::app(r.context.clone(), r.p.clone())
                && self.stretches[i + 1].from == Term::app(r.context.clone(), r.q.clone())
        });
        traces_ok && rows_ok && self.stretches.len() == self.rows.len() + 1
    }
}

/// Folds each conversion chain `c₀ ∼ … ∼ cₖ` into one stretch by joining
/// `c₀` successively with every later term. `fuel` bounds each join.
pub fn to_computation(p: &ProofNode, fuel: usize) -> Result<Endpiece, ProofError> {
    let nf = NormalForm::from_proof(p).ok_or(ProofError::NotNormalForm)?;
    let mut engine = Engine::default();
    let mut stretches = Vec::with_capacity(nf.links.len());
    for link in &nf.links {
        let from = link[0].clone();
        let mut left = ReductionTrace::empty(from.clone());
        let mut right = ReductionTrace::empty(from.clone());
        for c in &link[1..] {
            let w = engine.join(&left.end, c, fuel).ok_or(ProofError::FuelExhausted)?;
            left = left.then(w.left);
            right = w.right;
        }
        stretches.push(Stretch {
            from,
            to: link.last().expect("nonempty").clone(),
            common: left.end.clone(),
            left,
            right,
        });
    }
    let rows = nf
        .rows
        .iter()
        .map(|r| {
            let (p, q) = r.oracle.conclusion();
            OracleRow { context: r.context.clone(), p, q }
        })
        .collect();
    Ok(Endpiece { stretches, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentFlags {
    /// The confluence term is a whnf.
    pub confluence_whnf: bool,
    /// `Rᵢ ← MᵢPᵢ` is one weak β-step at the root, `Mᵢ = λx.X`.
    pub left_arrow_single_weak_beta: bool,
    /// `X` is not of the form `λy₁…yᵣ.x X₁⋯Xₘ`.
    pub left_arrow_not_head_variable: bool,
}

impl SegmentFlags {
    pub fn all(&self) -> bool {
        self.confluence_whnf && self.left_arrow_single_weak_beta && self.left_arrow_not_head_variable
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeReport {
    pub segments: Vec<SegmentFlags>,
    pub overall: bool,
}

/// Is the body of `λx.X`, under `r` further abstractions, headed by `x`?
fn head_is_binder(m: &Term) -> bool {
    let Kind::Lam(_, body) = m.kind() else {
        return false;
    };
    let mut x = body;
    let mut r = 0;
    while let Kind::Lam(_, b) = x.kind() {
        x = b;
        r += 1;
    }
    let (head, _) = x.spine();
    matches!(head.kind(), Kind::Bound(k) if *k == r)
}

/// The cascade conditions of each segment. The last segment ends at `N`,
/// whose arrow is unrestricted.
pub fn cascade_check(e: &Endpiece, fuel: usize) -> CascadeReport {
    let last = e.stretches.len() - 1;
    let segments: Vec<SegmentFlags> = e
        .stretches
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let confluence_whnf = is_whnf(&s.common, fuel) == WhnfStatus::Yes;
            if i == last {
                return SegmentFlags {
                    confluence_whnf,
                    left_arrow_single_weak_beta: true,
                    left_arrow_not_head_variable: true,
                };
            }
            let single = s.right.steps.len() == 1
                && s.right.steps[0].rule == RuleTag::WeakBeta
                && s.right.steps[0].position.0.is_empty();
            let m = &e.rows[i].context;
            SegmentFlags {
                confluence_whnf,
                left_arrow_single_weak_beta: single && m.is_lam(),
                left_arrow_not_head_variable: single && m.is_lam() && !head_is_binder(m),
            }
        })
        .collect();
    let overall = segments.iter().all(|s| s.all());
    CascadeReport { segments, overall }
}

#[cfg(test)]
mod tests {
    use super::super::{normalize_endpiece, ConvKind};
    use super::*;
    use crate::term::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn eta(s: Term) -> ProofNode {
        let q = Term::lam("x", Term::app(s.clone(), Term::var("x")));
        let sample = ProofNode::WeakConv {
            lhs: Term::app(s.clone(), k()),
            rhs: Term::app(q.clone(), k()),
            kind: ConvKind::BetaExpand,
            cert: None,
        };
        ProofNode::Oracle { p: s, q, samples: vec![sample], bound: Some(Default::default()), justification: String::new() }
    }

    #[test]
    fn degenerate_single_stretch() {
        let conv = ProofNode::Conversion(vec![p("$K $I $Omega"), i(), p("$I $I")]);
        let nf = normalize_endpiece(&conv, 100).unwrap();
        let e = to_computation(&nf, 1000).unwrap();
        assert_eq!(e.stretches.len(), 1);
        assert!(e.rows.is_empty());
        assert!(e.verify());
        assert_eq!(e.stretches[0].common, i());
        let r = cascade_check(&e, 100);
        assert!(r.overall);
    }

    #[test]
    fn one_row() {
        let nf = normalize_endpiece(&eta(k()), 100).unwrap();
        let e = to_computation(&nf, 1000).unwrap();
        assert_eq!(e.stretches.len(), 2);
        assert_eq!(e.rows.len(), 1);
        assert!(e.verify());
        // K ← I K is one root β-step, but I = λx.x has the bound variable as head.
        let r = cascade_check(&e, 100);
        assert!(r.segments[0].left_arrow_single_weak_beta);
        assert!(!r.segments[0].left_arrow_not_head_variable);
        assert!(!r.overall);
    }

    #[test]
    fn not_normal() {
        let ax = ProofNode::WeakConv { lhs: p("$I $K"), rhs: k(), kind: ConvKind::BetaContract, cert: None };
        assert!(matches!(to_computation(&ax, 10), Err(ProofError::NotNormalForm)));
    }

    #[test]
    fn flags() {
        // Confluence term with a closed head redex.
        let s = Stretch {
            from: p("$I $I"),
            to: p("$I $I"),
            common: p("$I $I"),
            left: ReductionTrace::empty(p("$I $I")),
            right: ReductionTrace::empty(p("$I $I")),
        };
        let e = Endpiece { stretches: vec![s], rows: vec![] };
        assert!(!cascade_check(&e, 100).segments[0].confluence_whnf);
        assert!(head_is_binder(&p("\\x y.x")));
        assert!(head_is_binder(&p("\\x.x $I")));
        assert!(!head_is_binder(&p("\\x y.y x")));
        assert!(!head_is_binder(&p("\\x.$I x")));
    }
}
