//! β, η, head and weak βΩ-reduction with fuel-bounded strategies.
//!
//! A weak β-redex is a β-redex that is closed as a whole. A weak Ω-step
//! replaces a closed subterm other than Ω by Ω, and fires only when the
//! subterm is certified unsolvable: either its head reduction revisits a term
//! up to α, or the caller put it on an explicit allowlist.

mod engine;
pub(crate) mod head;
mod join;
mod rules;

use std::fmt;

use thiserror::Error;

use crate::term::{Path, Term};

pub use engine::{Engine, WeakStep};
pub use head::{head_redex_path, solvability, CycleWitness, SolvabilityVerdict};
pub use join::{join, JoinWitness};
pub use rules::{
    beta_reduce, eta_step, is_whnf, omega_step, omega_step_with, to_whnf, weak_beta_step, BetaRun,
    Outcome, Strategy, WhnfStatus,
};

/// Default step budget.
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleTag {
    Beta,
    Eta,
    WeakBeta,
    OmegaRule,
    HeadBeta,
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleTag::Beta => "beta",
            RuleTag::Eta => "eta",
            RuleTag::WeakBeta => "wbeta",
            RuleTag::OmegaRule => "Omega",
            RuleTag::HeadBeta => "head-beta",
        })
    }
}

impl std::str::FromStr for RuleTag {
    type Err = String;
    fn from_str(s: &str) -> Result<RuleTag, String> {
        Ok(match s {
            "beta" => RuleTag::Beta,
            "eta" => RuleTag::Eta,
            "wbeta" => RuleTag::WeakBeta,
            "Omega" => RuleTag::OmegaRule,
            "head-beta" => RuleTag::HeadBeta,
            _ => return Err(format!("unknown rule tag {s:?}")),
        })
    }
}

/// Why a closed term may be replaced by Ω.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Cycle(CycleWitness),
    /// Taken on trust from an allowlist.
    Asserted,
}

impl Certificate {
    /// Replays a cycle witness against `term`; assertions pass only if allowed.
    pub fn confirms(&self, term: &Term, allow_asserted: bool) -> bool {
        match self {
            Certificate::Cycle(w) => w.term == *term && w.verify(),
            Certificate::Asserted => allow_asserted,
        }
    }
}

/// One contraction. `redex` and `contractum` are shown with the binders above
/// `position` opened on display names.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub position: Path,
    pub rule: RuleTag,
    pub redex: Term,
    pub contractum: Term,
    pub certificate: Option<Certificate>,
}

impl Step {
    pub(crate) fn between(before: &Term, after: &Term, position: Vec<u8>, rule: RuleTag) -> Step {
        let redex = before.subterm(&position).expect("step position");
        let contractum = after.subterm(&position).expect("step position");
        Step { position: Path(position), rule, redex, contractum, certificate: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace {
    pub start: Term,
    pub steps: Vec<Step>,
    pub end: Term,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("no subterm at @{0}")]
    InvalidPosition(Path),
    #[error("not a closed beta-redex at @{0}")]
    NotAWeakRedex(Path),
    #[error("not a beta-redex at @{0}")]
    NotABetaRedex(Path),
    #[error("subterm at @{0} is not certified unsolvable")]
    NotCertifiedUnsolvable(Path),
    #[error("subterm at @{0} is already Omega")]
    AlreadyOmega(Path),
    #[error("not an eta-redex at @{0}")]
    NotAnEtaRedex(Path),
    #[error("step {index}: {reason}")]
    Replay { index: usize, reason: String },
}

impl ReductionTrace {
    pub fn empty(t: Term) -> ReductionTrace {
        ReductionTrace { start: t.clone(), steps: Vec::new(), end: t }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every intermediate term, `start` and `end` included.
    pub fn terms(&self) -> Result<Vec<Term>, ReductionError> {
        let mut out = vec![self.start.clone()];
        for (i, s) in self.steps.iter().enumerate() {
            let next = apply_step(out.last().expect("nonempty"), s, true)
                .map_err(|reason| ReductionError::Replay { index: i + 1, reason })?;
            out.push(next);
        }
        Ok(out)
    }

    /// Checks every step against its rule and that the last term is `end`.
    /// Asserted Ω-certificates are accepted only when `allow_asserted`.
    pub fn replay(&self, allow_asserted: bool) -> Result<(), ReductionError> {
        let mut t = self.start.clone();
        for (i, s) in self.steps.iter().enumerate() {
            t = apply_step(&t, s, allow_asserted)
                .map_err(|reason| ReductionError::Replay { index: i + 1, reason })?;
        }
        if t != self.end {
            return Err(ReductionError::Replay {
                index: self.steps.len(),
                reason: "final term differs from recorded end".into(),
            });
        }
        Ok(())
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn then(mut self, other: ReductionTrace) -> ReductionTrace {
        assert!(self.end == other.start, "traces do not meet");
        self.steps.extend(other.steps);
        self.end = other.end;
        self
    }
}

fn apply_step(t: &Term, s: &Step, allow_asserted: bool) -> Result<Term, String> {
    let path = &s.position.0;
    let sub = t.at(path).ok_or("position outside the term")?;
    let next = match s.rule {
        RuleTag::Beta | RuleTag::HeadBeta | RuleTag::WeakBeta => {
            if !sub.is_beta_redex() {
                return Err("not a beta-redex".into());
            }
            if s.rule == RuleTag::WeakBeta && !sub.is_closed() {
                return Err("weak step on an open redex".into());
            }
            if s.rule == RuleTag::HeadBeta && head_redex_path(t).as_deref() != Some(&path[..]) {
                return Err("not the head redex".into());
            }
            t.replace_at(path, |r| r.contract())
        }
        RuleTag::Eta => t.replace_at(path, |r| rules::eta_contract(r).unwrap_or_else(|| r.clone())),
        RuleTag::OmegaRule => {
            if !sub.is_closed() || sub.is_omega() {
                return Err("Omega-step on an open term or on Omega".into());
            }
            let ok = s.certificate.as_ref().is_some_and(|c| c.confirms(sub, allow_asserted));
            if !ok {
                return Err("Omega-step without a confirmed certificate".into());
            }
            t.replace_at(path, |_| crate::term::omega_big())
        }
    }
    .ok_or("position outside the term")?;
    if s.rule == RuleTag::Eta && rules::eta_contract(sub).is_none() {
        return Err("not an eta-redex".into());
    }
    if t.subterm(path).as_ref() != Some(&s.redex) || next.subterm(path).as_ref() != Some(&s.contractum) {
        return Err("recorded redex or contractum does not match".into());
    }
    Ok(next)
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{} {} @{} {} => {}", i + 1, s.rule, s.position, s.redex, s.contractum)?;
        }
        Ok(())
    }
}
