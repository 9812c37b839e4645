use std::collections::{HashMap, HashSet};

use super::head::{head_redex_path, probe, CycleWitness, Probe};
use super::{Certificate, ReductionTrace, RuleTag, Step};
use crate::term::{omega_big, Kind, Term};

/// Fuel for each solvability probe made while looking for Ω-steps.
pub const DEFAULT_PROBE_FUEL: usize = 512;

#[derive(Clone)]
enum Verdict {
    Solvable,
    Unsolvable(CycleWitness),
    Asserted,
    Unknown,
}

/// Weak βΩ-reduction with a memo of solvability probes.
pub struct Engine {
    probe_fuel: usize,
    allow: HashSet<Term>,
    cache: HashMap<Term, Verdict>,
}

/// A weak βΩ-step: where, which rule, and the resulting term.
#[derive(Clone, Debug)]
pub struct WeakStep {
    pub path: Vec<u8>,
    pub rule: RuleTag,
    pub result: Term,
}

impl Default for Engine {
    fn default() -> Engine {
        Engine::new(DEFAULT_PROBE_FUEL)
    }
}

impl Engine {
    pub fn new(probe_fuel: usize) -> Engine {
        Engine { probe_fuel, allow: HashSet::new(), cache: HashMap::new() }
    }

    /// Terms accepted as unsolvable without a cycle.
    pub fn with_allowlist(mut self, terms: impl IntoIterator<Item = Term>) -> Engine {
        self.allow.extend(terms);
        self
    }

    fn verdict(&mut self, t: &Term) -> Verdict {
        if let Some(v) = self.cache.get(t) {
            return v.clone();
        }
        let v = if self.allow.contains(t) {
            Verdict::Asserted
        } else {
            match probe(t, self.probe_fuel) {
                Probe::Hnf(_) => Verdict::Solvable,
                Probe::Cycle(w) => Verdict::Unsolvable(w),
                Probe::Unknown => Verdict::Unknown,
            }
        };
        self.cache.insert(t.clone(), v.clone());
        v
    }

    /// Is `t` a legal target of a weak Ω-step?
    pub fn omega_candidate(&mut self, t: &Term) -> bool {
        if !t.is_closed() || t.redex_count() == 0 || t.is_omega() || head_redex_path(t).is_none() {
            return false;
        }
        matches!(self.verdict(t), Verdict::Unsolvable(_) | Verdict::Asserted)
    }

    /// Certificate for an Ω-step on `t`, if there is one.
    pub fn certificate(&mut self, t: &Term) -> Option<Certificate> {
        if !self.omega_candidate(t) {
            return None;
        }
        match self.verdict(t) {
            Verdict::Unsolvable(w) => Some(Certificate::Cycle(w)),
            Verdict::Asserted => Some(Certificate::Asserted),
            _ => None,
        }
    }

    /// Every weak βΩ-step out of `t`, outermost and leftmost first. The
    /// self-loop Ω → Ω is left out.
    pub fn weak_steps(&mut self, t: &Term) -> Vec<WeakStep> {
        let mut sites = Vec::new();
        let mut path = Vec::new();
        self.collect(t, &mut path, &mut sites, false);
        sites
            .into_iter()
            .map(|(path, rule)| {
                let result = apply(t, &path, rule);
                WeakStep { path, rule, result }
            })
            .collect()
    }

    /// The leftmost-outermost weak βΩ-step, preferring Ω over β at the
    /// same position.
    pub fn normal_step(&mut self, t: &Term) -> Option<WeakStep> {
        let mut sites = Vec::new();
        let mut path = Vec::new();
        self.collect(t, &mut path, &mut sites, true);
        sites.into_iter().next().map(|(path, rule)| {
            let result = apply(t, &path, rule);
            WeakStep { path, rule, result }
        })
    }

    fn collect(&mut self, t: &Term, path: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, RuleTag)>, first: bool) {
        if t.redex_count() == 0 || (first && !out.is_empty()) {
            return;
        }
        if t.is_closed() {
            if t.is_omega() {
                return;
            }
            if self.omega_candidate(t) {
                out.push((path.clone(), RuleTag::OmegaRule));
                if first {
                    return;
                }
            }
            if t.is_beta_redex() {
                out.push((path.clone(), RuleTag::WeakBeta));
                if first {
                    return;
                }
            }
        }
        match t.kind() {
            Kind::Lam(_, b) => {
                path.push(0);
                self.collect(b, path, out, first);
                path.pop();
            }
            Kind::App(f, a) => {
                path.push(0);
                self.collect(f, path, out, first);
                path.pop();
                path.push(1);
                self.collect(a, path, out, first);
                path.pop();
            }
            _ => {}
        }
    }

    /// Turns `(path, rule)` moves into a checked trace with certificates.
    pub fn trace_from_moves(&mut self, start: &Term, moves: &[(Vec<u8>, RuleTag)]) -> ReductionTrace {
        let mut steps = Vec::with_capacity(moves.len());
        let mut cur = start.clone();
        for (path, rule) in moves {
            let next = apply(&cur, path, *rule);
            let mut step = Step::between(&cur, &next, path.clone(), *rule);
            if *rule == RuleTag::OmegaRule {
                let sub = cur.at(path).expect("step position").clone();
                step.certificate = self.certificate(&sub);
            }
            steps.push(step);
            cur = next;
        }
        ReductionTrace { start: start.clone(), steps, end: cur }
    }

    /// Follows `normal_step` for at most `fuel` steps.
    pub fn normal_trace(&mut self, t: &Term, fuel: usize) -> (ReductionTrace, bool) {
        let mut moves = Vec::new();
        let mut cur = t.clone();
        let mut finished = false;
        for _ in 0..fuel {
            match self.normal_step(&cur) {
                Some(s) => {
                    moves.push((s.path, s.rule));
                    cur = s.result;
                }
                None => {
                    finished = true;
                    break;
                }
            }
        }
        if !finished {
            finished = self.normal_step(&cur).is_none();
        }
        (self.trace_from_moves(t, &moves), finished)
    }
}

pub(crate) fn apply(t: &Term, path: &[u8], rule: RuleTag) -> Term {
    t.replace_at(path, |r| match rule {
        RuleTag::OmegaRule => omega_big(),
        _ => r.contract(),
    })
    .expect("step position")
}
