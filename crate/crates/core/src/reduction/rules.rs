use std::collections::HashSet;

use super::head::{head_redex_path, probe, trace_of, Probe};
use super::{Certificate, ReductionError, ReductionTrace, RuleTag, Step};
use crate::term::{omega_big, Kind, Path, Term};

/// Contracts the closed β-redex at `pos`.
pub fn weak_beta_step(t: &Term, pos: &Path) -> Result<Term, ReductionError> {
    let sub = t.at(&pos.0).ok_or_else(|| ReductionError::InvalidPosition(pos.clone()))?;
    if !sub.is_beta_redex() || !sub.is_closed() {
        return Err(ReductionError::NotAWeakRedex(pos.clone()));
    }
    Ok(t.replace_at(&pos.0, |r| r.contract()).expect("checked position"))
}

/// Replaces the subterm at `pos` by Ω if head reduction certifies it unsolvable.
pub fn omega_step(t: &Term, pos: &Path, fuel: usize) -> Result<Term, ReductionError> {
    omega_step_with(t, pos, fuel, &HashSet::new()).map(|(t, _)| t)
}

/// As [`omega_step`], also accepting the terms in `allow`. Returns the
/// certificate used.
pub fn omega_step_with(
    t: &Term,
    pos: &Path,
    fuel: usize,
    allow: &HashSet<Term>,
) -> Result<(Term, Certificate), ReductionError> {
    let sub = t.at(&pos.0).ok_or_else(|| ReductionError::InvalidPosition(pos.clone()))?;
    if sub.is_omega() {
        return Err(ReductionError::AlreadyOmega(pos.clone()));
    }
    if !sub.is_closed() {
        return Err(ReductionError::NotCertifiedUnsolvable(pos.clone()));
    }
    let cert = if allow.contains(sub) {
        Certificate::Asserted
    } else {
        match probe(sub, fuel) {
            Probe::Cycle(w) => Certificate::Cycle(w),
            _ => return Err(ReductionError::NotCertifiedUnsolvable(pos.clone())),
        }
    };
    Ok((t.replace_at(&pos.0, |_| omega_big()).expect("checked position"), cert))
}

pub(crate) fn eta_contract(t: &Term) -> Option<Term> {
    let Kind::Lam(_, body) = t.kind() else { return None };
    let Kind::App(m, x) = body.kind() else { return None };
    if !matches!(x.kind(), Kind::Bound(0)) || m.mentions_index(0) {
        return None;
    }
    Some(m.unshift(0))
}

/// Contracts the η-redex `λx.M x` at `pos` to `M`.
pub fn eta_step(t: &Term, pos: &Path) -> Result<Term, ReductionError> {
    let sub = t.at(&pos.0).ok_or_else(|| ReductionError::InvalidPosition(pos.clone()))?;
    let m = eta_contract(sub).ok_or_else(|| ReductionError::NotAnEtaRedex(pos.clone()))?;
    Ok(t.replace_at(&pos.0, |_| m).expect("checked position"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    HeadOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    NormalForm,
    HeadNormalForm,
    FuelExhausted,
}

#[derive(Clone, Debug)]
pub struct BetaRun {
    pub trace: ReductionTrace,
    pub outcome: Outcome,
}

fn leftmost_redex(t: &Term, path: &mut Vec<u8>) -> bool {
    if t.redex_count() == 0 {
        return false;
    }
    if t.is_beta_redex() {
        return true;
    }
    match t.kind() {
        Kind::Lam(_, b) => {
            path.push(0);
            if leftmost_redex(b, path) {
                return true;
            }
            path.pop();
        }
        Kind::App(f, a) => {
            path.push(0);
            if leftmost_redex(f, path) {
                return true;
            }
            path.pop();
            path.push(1);
            if leftmost_redex(a, path) {
                return true;
            }
            path.pop();
        }
        _ => {}
    }
    false
}

/// Unrestricted β-reduction for at most `fuel` steps.
pub fn beta_reduce(t: &Term, strategy: Strategy, fuel: usize) -> BetaRun {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    let rule = match strategy {
        Strategy::LeftmostOutermost => RuleTag::Beta,
        Strategy::HeadOnly => RuleTag::HeadBeta,
    };
    let find = |t: &Term| match strategy {
        Strategy::HeadOnly => head_redex_path(t),
        Strategy::LeftmostOutermost => {
            let mut p = Vec::new();
            leftmost_redex(t, &mut p).then_some(p)
        }
    };
    let mut outcome = Outcome::FuelExhausted;
    for n in 0..=fuel {
        let Some(path) = find(&cur) else {
            outcome = match strategy {
                Strategy::HeadOnly => Outcome::HeadNormalForm,
                Strategy::LeftmostOutermost => Outcome::NormalForm,
            };
            break;
        };
        if n == fuel {
            break;
        }
        let next = cur.replace_at(&path, |r| r.contract()).expect("redex path");
        steps.push(Step::between(&cur, &next, path, rule));
        cur = next;
    }
    BetaRun { trace: ReductionTrace { start: t.clone(), steps, end: cur }, outcome }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhnfStatus {
    Yes,
    No,
    Unknown,
}

/// Is the closed term `t` a weak βΩ head normal form?
pub fn is_whnf(t: &Term, fuel: usize) -> WhnfStatus {
    if t.is_omega() {
        return WhnfStatus::Yes;
    }
    let Some(path) = head_redex_path(t) else {
        return WhnfStatus::Yes;
    };
    if t.at(&path).is_some_and(|r| r.is_closed()) {
        return WhnfStatus::No;
    }
    match probe(t, fuel) {
        Probe::Hnf(_) => WhnfStatus::Yes,
        Probe::Cycle(_) => WhnfStatus::No,
        Probe::Unknown => WhnfStatus::Unknown,
    }
}

/// Reduces a closed term to a weak βΩ head normal form: head β-steps while the
/// head redex is closed, or a single Ω-step when head reduction cycles.
/// `None` when the solvability probe runs out of fuel.
pub fn to_whnf(t: &Term, fuel: usize) -> Option<ReductionTrace> {
    if t.is_omega() {
        return Some(ReductionTrace::empty(t.clone()));
    }
    match probe(t, fuel) {
        Probe::Unknown => None,
        Probe::Cycle(w) => {
            let mut step = Step::between(t, &omega_big(), Vec::new(), RuleTag::OmegaRule);
            step.certificate = Some(Certificate::Cycle(w));
            Some(ReductionTrace { start: t.clone(), steps: vec![step], end: omega_big() })
        }
        Probe::Hnf(steps) => {
            let mut prev = t.clone();
            let mut weak = Vec::new();
            for (path, next) in steps {
                if !prev.at(&path).is_some_and(|r| r.is_closed()) {
                    break;
                }
                prev = next.clone();
                weak.push((path, next));
            }
            Some(trace_of(t, &weak, RuleTag::WeakBeta))
        }
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
    fn weak_beta() {
        assert_eq!(weak_beta_step(&p("(\\x.x) $I"), &Path::root()).unwrap(), i());
        assert_eq!(
            weak_beta_step(&p("\\y.(\\x.x) y"), &Path(vec![0])),
            Err(ReductionError::NotAWeakRedex(Path(vec![0])))
        );
        assert_eq!(weak_beta_step(&p("(\\x.$K*) $Omega"), &Path::root()).unwrap(), k_star());
        assert!(matches!(
            weak_beta_step(&i(), &Path(vec![1])),
            Err(ReductionError::InvalidPosition(_))
        ));
    }

    #[test]
    fn omega_rule() {
        assert_eq!(omega_step(&p("$Omega $I"), &Path::root(), 10).unwrap(), omega_big());
        assert_eq!(
            omega_step(&i(), &Path::root(), 10),
            Err(ReductionError::NotCertifiedUnsolvable(Path::root()))
        );
        assert_eq!(
            omega_step(&omega_big(), &Path::root(), 10),
            Err(ReductionError::AlreadyOmega(Path::root()))
        );
        let growing = p("(\\x.x x x)(\\x.x x x)");
        assert!(omega_step(&growing, &Path::root(), 100).is_err());
        let allow: HashSet<Term> = [growing.clone()].into_iter().collect();
        let (t, c) = omega_step_with(&growing, &Path::root(), 100, &allow).unwrap();
        assert_eq!((t, c), (omega_big(), Certificate::Asserted));
    }

    #[test]
    fn eta() {
        assert_eq!(eta_step(&p("\\x.$I x"), &Path::root()).unwrap(), i());
        assert!(eta_step(&p("\\x.x x"), &Path::root()).is_err());
        assert_eq!(eta_step(&p("\\x.$K* $I x"), &Path::root()).unwrap(), p("$K* $I"));
        assert_eq!(eta_step(&p("\\y.\\x.y x"), &Path(vec![0])).unwrap(), p("\\y.y"));
    }

    #[test]
    fn beta_strategies() {
        let r = beta_reduce(&p("(\\x.x) $I"), Strategy::LeftmostOutermost, 10);
        assert_eq!((r.trace.len(), r.outcome, r.trace.end.clone()), (1, Outcome::NormalForm, i()));
        let r = beta_reduce(&omega_big(), Strategy::HeadOnly, 5);
        assert_eq!((r.trace.len(), r.outcome), (5, Outcome::FuelExhausted));
        assert_eq!(r.trace.end, omega_big());
        let f = p("\\r.r");
        let r = beta_reduce(&Term::app(theta(), f.clone()), Strategy::HeadOnly, 2);
        assert_eq!(r.trace.end, Term::app(f.clone(), Term::app(theta(), f)));
        r.trace.replay(false).unwrap();
    }

    #[test]
    fn whnf_status() {
        assert_eq!(is_whnf(&omega_big(), 10), WhnfStatus::Yes);
        assert_eq!(is_whnf(&p("(\\x.x)(\\x.x)"), 10), WhnfStatus::No);
        assert_eq!(is_whnf(&p("\\x.(\\y.y) x"), 10), WhnfStatus::Yes);
        assert_eq!(is_whnf(&p("\\x.$Omega"), 10), WhnfStatus::No);
        assert_eq!(is_whnf(&p("\\x.(\\y.y y y) (\\y.y y y)"), 10), WhnfStatus::No);
    }

    #[test]
    fn whnf_reduction() {
        let tr = to_whnf(&p("$K* $I"), 10).unwrap();
        assert_eq!((tr.len(), tr.end.clone()), (1, p("\\b.b")));
        let tr = to_whnf(&p("$Omega $Omega"), 10).unwrap();
        assert_eq!((tr.len(), tr.end.clone()), (1, omega_big()));
        assert_eq!(tr.steps[0].rule, RuleTag::OmegaRule);
        tr.replay(false).unwrap();
        assert!(to_whnf(&p("(\\x.x x x)(\\x.x x x)"), 50).is_none());
    }
}
