use std::collections::HashMap;

use super::{ReductionTrace, RuleTag, Step};
use crate::term::{Kind, Term};

/// Terms larger than this stop a probe with an unknown verdict.
pub(crate) const PROBE_SIZE_CAP: usize = 1 << 20;

/// Position of the head redex, if the term is not a head normal form.
pub fn head_redex_path(t: &Term) -> Option<Vec<u8>> {
    let mut path = Vec::new();
    let mut t = t;
    while let Kind::Lam(_, b) = t.kind() {
        path.push(0);
        t = b;
    }
    let (head, args) = t.spine();
    if args.is_empty() || !head.is_lam() {
        return None;
    }
    path.extend(std::iter::repeat(0).take(args.len() - 1));
    Some(path)
}

pub(crate) fn head_step(t: &Term) -> Option<(Vec<u8>, Term)> {
    let path = head_redex_path(t)?;
    let next = t.replace_at(&path, |r| r.contract()).expect("head redex path");
    Some((path, next))
}

/// Head reduction of a term revisits a term: the terms after `first` and
/// `second` head steps from `term` are α-equal.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleWitness {
    pub term: Term,
    pub first: usize,
    pub second: usize,
}

impl CycleWitness {
    pub fn verify(&self) -> bool {
        if self.first >= self.second {
            return false;
        }
        let mut t = self.term.clone();
        let mut at_first = None;
        for i in 0..=self.second {
            if i == self.first {
                at_first = Some(t.clone());
            }
            if i == self.second {
                return at_first.as_ref() == Some(&t);
            }
            match head_step(&t) {
                Some((_, n)) => t = n,
                None => return false,
            }
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolvabilityVerdict {
    /// Head reduction reaches a head normal form.
    Solvable(ReductionTrace),
    UnsolvableCertified(CycleWitness),
    Unknown,
}

impl SolvabilityVerdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self, SolvabilityVerdict::Solvable(_))
    }

    pub fn is_unsolvable(&self) -> bool {
        matches!(self, SolvabilityVerdict::UnsolvableCertified(_))
    }
}

pub(crate) enum Probe {
    Hnf(Vec<(Vec<u8>, Term)>),
    Cycle(CycleWitness),
    Unknown,
}

/// Head-reduces for at most `fuel` steps, remembering every term seen.
/// On reaching a head normal form, returns the steps as `(path, result)`.
pub(crate) fn probe(t: &Term, fuel: usize) -> Probe {
    let mut seen: HashMap<Term, usize> = HashMap::new();
    let mut steps = Vec::new();
    let mut cur = t.clone();
    seen.insert(cur.clone(), 0);
    for n in 1..=fuel {
        let Some((path, next)) = head_step(&cur) else {
            return Probe::Hnf(steps);
        };
        if let Some(&first) = seen.get(&next) {
            return Probe::Cycle(CycleWitness { term: t.clone(), first, second: n });
        }
        if next.size() > PROBE_SIZE_CAP {
            return Probe::Unknown;
        }
        seen.insert(next.clone(), n);
        steps.push((path, next.clone()));
        cur = next;
    }
    if head_redex_path(&cur).is_none() {
        Probe::Hnf(steps)
    } else {
        Probe::Unknown
    }
}

pub(crate) fn trace_of(start: &Term, steps: &[(Vec<u8>, Term)], rule: RuleTag) -> ReductionTrace {
    let mut out = Vec::with_capacity(steps.len());
    let mut prev = start.clone();
    for (path, next) in steps {
        out.push(Step::between(&prev, next, path.clone(), rule));
        prev = next.clone();
    }
    ReductionTrace { start: start.clone(), steps: out, end: prev }
}

/// Head-reduces `t` for at most `fuel` steps.
pub fn solvability(t: &Term, fuel: usize) -> SolvabilityVerdict {
    match probe(t, fuel) {
        Probe::Hnf(steps) => SolvabilityVerdict::Solvable(trace_of(t, &steps, RuleTag::HeadBeta)),
        Probe::Cycle(w) => SolvabilityVerdict::UnsolvableCertified(w),
        Probe::Unknown => SolvabilityVerdict::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn verdicts() {
        assert!(solvability(&i(), 10).is_solvable());
        let SolvabilityVerdict::UnsolvableCertified(w) = solvability(&omega_big(), 10) else {
            panic!("Omega must be certified")
        };
        assert_eq!((w.first, w.second), (0, 1));
        assert!(w.verify());
        let SolvabilityVerdict::Solvable(tr) = solvability(&theta(), 10) else { panic!() };
        assert_eq!(tr.end, p("\\b.b ((\\a b.b (a a b)) (\\a b.b (a a b)) b)"));
        assert!(solvability(&p("$Omega $I"), 10).is_unsolvable());
        let growing = p("(\\x.x x x)(\\x.x x x)");
        assert_eq!(solvability(&growing, 50), SolvabilityVerdict::Unknown);
    }

    #[test]
    fn bogus_witness_fails() {
        let w = CycleWitness { term: i(), first: 0, second: 1 };
        assert!(!w.verify());
        let w = CycleWitness { term: omega_big(), first: 1, second: 1 };
        assert!(!w.verify());
    }

    #[test]
    fn head_path_under_binders() {
        assert_eq!(head_redex_path(&p("\\y.(\\x.x) y z")), Some(vec![0, 0]));
        assert_eq!(head_redex_path(&p("\\y.y ((\\x.x) y)")), None);
    }
}
