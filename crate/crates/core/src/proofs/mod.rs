//! Finite proof fragments of equality in Hω.
//!
//! A fragment is built from identity axioms, the four weak βΩ-conversion
//! axioms, the Leibnitz rule, and ω-rule nodes that carry finitely many
//! sample premises together with a declared ordinal bound. A fifth node,
//! [`ProofNode::Conversion`], records a chain of weak βΩ-convertible terms;
//! the normalizer uses it for the conversion stretches of normal-form
//! endpieces.

mod check;
mod endpiece;
mod format;
pub mod gen;
mod normal;

use thiserror::Error;

use crate::ordinals::{hessenberg_sum, omega_pow, Ordinal};
use crate::reduction::Certificate;
use crate::term::Term;

pub use check::{check_proof, check_proof_with, CheckConfig, Verdict};
pub use endpiece::{cascade_check, to_computation, CascadeReport, Endpiece, OracleRow, SegmentFlags, Stretch};
pub use format::{parse_proof, print_proof};
pub use normal::{
    is_normal_form, lift_context, normalize_endpiece, reverse_proof, splice_transitivity, NormalForm, Row,
};

/// The variable of Leibnitz contexts.
pub const HOLE: &str = "z";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConvKind {
    /// `(λx.U)N = [N/x]U`
    BetaContract,
    /// `[N/x]U = (λx.U)N`
    BetaExpand,
    /// `M = Ω`
    ToOmega,
    /// `Ω = M`
    FromOmega,
}

impl ConvKind {
    pub fn flip(self) -> ConvKind {
        match self {
            ConvKind::BetaContract => ConvKind::BetaExpand,
            ConvKind::BetaExpand => ConvKind::BetaContract,
            ConvKind::ToOmega => ConvKind::FromOmega,
            ConvKind::FromOmega => ConvKind::ToOmega,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConvKind::BetaContract => "beta-contract",
            ConvKind::BetaExpand => "beta-expand",
            ConvKind::ToOmega => "to-Omega",
            ConvKind::FromOmega => "from-Omega",
        }
    }

    pub fn from_name(s: &str) -> Option<ConvKind> {
        [ConvKind::BetaContract, ConvKind::BetaExpand, ConvKind::ToOmega, ConvKind::FromOmega]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProofNode {
    /// `M = M`
    Identity(Term),
    WeakConv { lhs: Term, rhs: Term, kind: ConvKind, cert: Option<Certificate> },
    /// From `[M/z]X = [M/z]Y` and `M = N` infer `[N/z]X = [N/z]Y`.
    Leibnitz { x: Term, y: Term, m: Term, n: Term, left: Box<ProofNode>, right: Box<ProofNode> },
    /// `P = Q` from `P A = Q A` for every closed `A`, of which `samples` are
    /// given. `bound` is the declared ordinal of the premises.
    Oracle { p: Term, q: Term, samples: Vec<ProofNode>, bound: Option<Ordinal>, justification: String },
    /// `t₀ = tₖ` where consecutive terms have a common weak βΩ-reduct.
    Conversion(Vec<Term>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("proof is not in normal form")]
    NotNormalForm,
    #[error("conclusions do not share the middle term")]
    MiddleMismatch,
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("omega node without a declared ordinal bound")]
    MissingOrdinalBound,
    #[error("context has free variables other than {HOLE}")]
    BadContext,
    #[error("proof syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl ProofNode {
    pub fn leibnitz(x: Term, y: Term, m: Term, n: Term, left: ProofNode, right: ProofNode) -> ProofNode {
        ProofNode::Leibnitz { x, y, m, n, left: Box::new(left), right: Box::new(right) }
    }

    /// The equation this node proves.
    pub fn conclusion(&self) -> (Term, Term) {
        match self {
            ProofNode::Identity(m) => (m.clone(), m.clone()),
            ProofNode::WeakConv { lhs, rhs, .. } => (lhs.clone(), rhs.clone()),
            ProofNode::Leibnitz { x, y, n, .. } => (x.substitute(HOLE, n), y.substitute(HOLE, n)),
            ProofNode::Oracle { p, q, .. } => (p.clone(), q.clone()),
            ProofNode::Conversion(chain) => (
                chain.first().expect("nonempty chain").clone(),
                chain.last().expect("nonempty chain").clone(),
            ),
        }
    }

    /// Number of nodes, samples included.
    pub fn size(&self) -> usize {
        match self {
            ProofNode::Leibnitz { left, right, .. } => 1 + left.size() + right.size(),
            ProofNode::Oracle { samples, .. } => 1 + samples.iter().map(|s| s.size()).sum::<usize>(),
            _ => 1,
        }
    }

    /// Number of ω-rule nodes, samples included.
    pub fn oracle_count(&self) -> usize {
        match self {
            ProofNode::Leibnitz { left, right, .. } => left.oracle_count() + right.oracle_count(),
            ProofNode::Oracle { samples, .. } => 1 + samples.iter().map(|s| s.oracle_count()).sum::<usize>(),
            _ => 0,
        }
    }

    /// Height of the tree, samples included.
    pub fn depth(&self) -> usize {
        match self {
            ProofNode::Leibnitz { left, right, .. } => 1 + left.depth().max(right.depth()),
            ProofNode::Oracle { samples, .. } => 1 + samples.iter().map(|s| s.depth()).max().unwrap_or(0),
            _ => 1,
        }
    }

    /// The ω-rule nodes of the endpiece, the part above no ω-rule node.
    pub fn endpiece_oracles(&self) -> Vec<&ProofNode> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a ProofNode, out: &mut Vec<&'a ProofNode>) {
            match p {
                ProofNode::Leibnitz { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
                ProofNode::Oracle { .. } => out.push(p),
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }
}

/// The ordinal of a proof: `ω^θ` for an ω-rule node with declared `θ`,
/// otherwise `1 ⊕ ord(𝒯₁) ⊕ … ⊕ ord(𝒯ₜ)` over the ω-rule nodes 𝒯ᵢ that end
/// the endpiece.
pub fn ord_of_proof(p: &ProofNode) -> Result<Ordinal, ProofError> {
    match p {
        ProofNode::Oracle { bound, .. } => {
            bound.clone().map(omega_pow).ok_or(ProofError::MissingOrdinalBound)
        }
        _ => p
            .endpiece_oracles()
            .into_iter()
            .try_fold(Ordinal::one(), |acc, o| Ok(hessenberg_sum(&acc, &ord_of_proof(o)?))),
    }
}
