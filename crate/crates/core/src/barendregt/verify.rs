//! Desk-scale checks of the construction on a bounded domain.

use std::ops::Range;

use crate::bohm::{approx_alpha_eq, bt_approx, eta_bt_eq, BTNode, BottomKind, BtEq};
use crate::reduction::head::head_step;
use crate::reduction::{solvability, CycleWitness, Engine, JoinWitness, ReductionTrace, RuleTag, SolvabilityVerdict, Step};
use crate::term::{church, i, k, k_star, omega_big, succ, theta_half, tuple, Term};

use super::{BarendregtError, ConstructionKit};

fn fuel_out(what: &str) -> BarendregtError {
    BarendregtError::FuelExhausted { what: what.to_string() }
}

fn unexpected(what: &str, found: &Term) -> BarendregtError {
    BarendregtError::Unexpected { what: what.to_string(), found: found.to_string() }
}

/// Head reduction recorded step by step. Steps on closed redexes are
/// tagged `WeakBeta`, the others `HeadBeta`.
struct HeadRun {
    trace: ReductionTrace,
}

impl HeadRun {
    fn new(t: Term) -> HeadRun {
        HeadRun { trace: ReductionTrace::empty(t) }
    }

    fn cur(&self) -> &Term {
        &self.trace.end
    }

    fn step(&mut self) -> bool {
        let Some((path, next)) = head_step(&self.trace.end) else {
            return false;
        };
        let closed = self.trace.end.at(&path).is_some_and(|r| r.is_closed());
        let rule = if closed { RuleTag::WeakBeta } else { RuleTag::HeadBeta };
        self.trace.steps.push(Step::between(&self.trace.end, &next, path, rule));
        self.trace.end = next;
        true
    }

    /// Steps until `stop` holds, at most `fuel` times.
    fn until(&mut self, fuel: usize, stop: impl Fn(&Term) -> bool) -> bool {
        for _ in 0..fuel {
            if stop(self.cur()) {
                return true;
            }
            if !self.step() {
                break;
            }
        }
        stop(self.cur())
    }

    fn len(&self) -> usize {
        self.trace.steps.len()
    }
}

fn lookup_trace(start: Term, fuel: usize, what: &str) -> Result<ReductionTrace, BarendregtError> {
    let mut run = HeadRun::new(start);
    if !run.until(fuel, |t| *t == k_star() || t.is_omega()) {
        return Err(fuel_out(what));
    }
    Ok(run.trace)
}

/// Head reduction of `□ s` to `K*` or `Ω`.
pub fn box_trace(kit: &ConstructionKit, code: u64, fuel: usize) -> Result<ReductionTrace, BarendregtError> {
    lookup_trace(Term::app(kit.box_term.clone(), church(code)), fuel, "box")
}

/// Head reduction of `D s` to `K*` or `Ω`.
pub fn d_trace(kit: &ConstructionKit, code: u64, fuel: usize) -> Result<ReductionTrace, BarendregtError> {
    lookup_trace(Term::app(kit.d.clone(), church(code)), fuel, "D")
}

/// The head steps from `Bᵢ` to `λx y.D x ī Θ½ Θ½ U 0 (λz.Bᵢ(x * z))`.
pub fn b_unfold(kit: &ConstructionKit, index: u8, fuel: usize) -> Result<ReductionTrace, BarendregtError> {
    let v = Term::var;
    let cont = Term::lam("z", Term::app(kit.b(index).clone(), Term::apps(kit.concat.clone(), [v("x"), v("z")])));
    let target = Term::lams(
        &["x", "y"],
        Term::apps(
            kit.d.clone(),
            [v("x"), church(u64::from(index)), theta_half(), theta_half(), kit.u.clone(), church(0), cont],
        ),
    );
    let mut run = HeadRun::new(kit.b(index).clone());
    if !run.until(fuel, |t| *t == target) {
        return Err(fuel_out("unfolding B"));
    }
    Ok(run.trace)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// `Bᵢ s` to `λy.D s ī …`.
    Unfold,
    /// `D s` to `K*` or `Ω`.
    DPhase,
    /// `K* ī → I`.
    Projection,
    /// `I Θ½ → Θ½`.
    Identity,
    /// `Θ½ Θ½ → λb.b(Θ b)`, the last weak step.
    ThetaUnfold,
    /// Head steps on open redexes up to the pivot point.
    ToPivot,
}

#[derive(Clone, Debug)]
pub struct HeadTraceB {
    pub trace: ReductionTrace,
    pub phases: Vec<(Phase, Range<usize>)>,
    pub member: bool,
    /// Number of leading steps that are weak.
    pub weak_steps: usize,
    /// Argument counts under `λy` from the `I`-term on, repeats dropped.
    pub countdown: Vec<usize>,
    /// For non-members, a head cycle of `Bᵢ s`.
    pub certificate: Option<CycleWitness>,
}

impl HeadTraceB {
    pub fn pivot(&self) -> Option<&Term> {
        self.member.then_some(&self.trace.end)
    }

    pub fn phase(&self, p: Phase) -> Option<Range<usize>> {
        self.phases.iter().find(|(q, _)| *q == p).map(|(_, r)| r.clone())
    }
}

fn body_arity(t: &Term) -> usize {
    t.as_lam().map_or(0, |(_, b)| b.spine().1.len())
}

/// Head reduction of `Bᵢ s`, cut into phases and checked against the
/// expected terms. For a member it ends at the pivot point; for a
/// non-member it ends at `λy.Ω ī …` with a cycle certificate.
pub fn head_trace_b(kit: &ConstructionKit, index: u8, code: u64, fuel: usize) -> Result<HeadTraceB, BarendregtError> {
    let start = Term::app(kit.b(index).clone(), church(code));
    let mut run = HeadRun::new(start.clone());
    let mut phases = Vec::new();
    let mut mark = 0;
    let mut close = |p: Phase, run: &HeadRun, phases: &mut Vec<(Phase, Range<usize>)>| {
        phases.push((p, mark..run.len()));
        mark = run.len();
    };

    let entered = kit.after_d(index, code, Term::app(kit.d.clone(), church(code)));
    if !run.until(fuel.min(4), |t| *t == entered) {
        return Err(unexpected("unfolding of B s", run.cur()));
    }
    close(Phase::Unfold, &run, &mut phases);

    let member_end = kit.after_d(index, code, k_star());
    let other_end = kit.after_d(index, code, omega_big());
    if !run.until(fuel, |t| *t == member_end || *t == other_end) {
        return Err(fuel_out("D-phase"));
    }
    close(Phase::DPhase, &run, &mut phases);
    let member = *run.cur() == member_end;

    if !member {
        let certificate = match solvability(&start, fuel) {
            SolvabilityVerdict::UnsolvableCertified(w) => Some(w),
            _ => return Err(fuel_out("unsolvability of B s")),
        };
        let weak_steps = run.trace.steps.iter().take_while(|s| s.rule == RuleTag::WeakBeta).count();
        return Ok(HeadTraceB { trace: run.trace, phases, member, weak_steps, countdown: vec![], certificate });
    }

    let w = kit.continuation(index, code);
    let tail = |head: Term, n: usize| {
        let args = [theta_half(), theta_half(), kit.u.clone(), church(0), w.clone()];
        Term::lam("y", Term::apps(head, args[5 - n..].iter().cloned()))
    };
    let theta_b = Term::lam("b", Term::app(Term::var("b"), Term::apps(theta_half(), [theta_half(), Term::var("b")])));
    let expected = [
        (Phase::Projection, tail(i(), 5)),
        (Phase::Identity, tail(theta_half(), 4)),
        (Phase::ThetaUnfold, tail(theta_b, 3)),
    ];
    for (p, want) in expected {
        if !run.step() || *run.cur() != want {
            return Err(unexpected("projection phase", run.cur()));
        }
        close(p, &run, &mut phases);
    }
    let weak_steps = run.len();
    if run.trace.steps.iter().any(|s| s.rule != RuleTag::WeakBeta) {
        return Err(unexpected("weak part of the head reduction", run.cur()));
    }

    let pivot = kit.pivot(index, code);
    if !run.until(fuel.min(8), |t| *t == pivot) {
        return Err(unexpected("approach to the pivot point", run.cur()));
    }
    close(Phase::ToPivot, &run, &mut phases);
    if run.trace.steps[weak_steps..].iter().any(|s| s.rule != RuleTag::HeadBeta) {
        return Err(unexpected("open part of the head reduction", run.cur()));
    }

    let terms = run.trace.terms().map_err(|_| unexpected("replay", run.cur()))?;
    let from = phases[1].1.end + 1;
    let mut countdown: Vec<usize> = terms[from..terms.len() - 1].iter().map(body_arity).collect();
    countdown.dedup();
    Ok(HeadTraceB { trace: run.trace, phases, member, weak_steps, countdown, certificate: None })
}

#[derive(Clone, Debug)]
pub struct ZetaReport {
    /// Five weak head steps from `([P/y]Z) m M` to its first tuple.
    pub unfold: ReductionTrace,
    pub rhs: Term,
    pub join: JoinWitness,
}

/// `([P/y]Z) m M` against `[M m, P Ωᵐ (([P/y]Z) m⁺ M)]`.
pub fn verify_zeta(kit: &ConstructionKit, p: &Term, m: u64, big_m: &Term, fuel: usize) -> Result<ZetaReport, BarendregtError> {
    let zp = kit.z_with(p);
    let numeral = church(m);
    let next = Term::app(succ(), numeral.clone());
    let lhs = Term::apps(zp.clone(), [numeral.clone(), big_m.clone()]);
    let mut run = HeadRun::new(lhs);
    for _ in 0..5 {
        if !run.step() {
            return Err(unexpected("unfolding of Z", run.cur()));
        }
    }
    let shuttle = Term::lam("u", Term::app(Term::var("u"), omega_big()));
    let recur = Term::apps(zp, [next, big_m.clone()]);
    let unfolded = tuple(&[
        Term::app(big_m.clone(), numeral.clone()),
        Term::apps(numeral.clone(), [shuttle, p.clone(), recur.clone()]),
    ]);
    if *run.cur() != unfolded || run.trace.steps.iter().any(|s| s.rule != RuleTag::WeakBeta) {
        return Err(unexpected("unfolding of Z", run.cur()));
    }
    let mut rest = vec![omega_big(); m as usize];
    rest.push(recur);
    let rhs = tuple(&[Term::app(big_m.clone(), numeral), Term::apps(p.clone(), rest)]);
    let join = Engine::default().join(run.cur(), &rhs, fuel).ok_or_else(|| fuel_out("zeta join"))?;
    Ok(ZetaReport { unfold: run.trace, rhs, join })
}

/// Arguments that walk `Bᵢ s` past `m` pivot points and pull out the first
/// component there, `Bᵢ(s * m)`. They depend on neither `i` nor `s`.
///
/// For `m = 0` this is `I, K`. Otherwise `P = λx₁…xₘ z.z x₁…xₘ` is put for
/// `y`; at the `k`-th pivot `K*` takes the second component, which reduces
/// to `P Ωᵏ Rₖ₊₁`, and `I`s fill `P` up so that `πₖ₊₁` selects `Rₖ₊₁`.
/// A final `K` takes the first component.
pub fn bohm_out_args(m: u64) -> Vec<Term> {
    if m == 0 {
        return vec![i(), k()];
    }
    let m = m as usize;
    let xs: Vec<String> = (1..=m).map(|j| format!("x{j}")).collect();
    let mut names: Vec<&str> = xs.iter().map(String::as_str).collect();
    names.push("z");
    let p = Term::lams(&names, Term::apps(Term::var("z"), xs.iter().map(|x| Term::var(x))));
    let mut out = vec![p];
    for j in 0..m {
        out.push(k_star());
        out.extend(std::iter::repeat(i()).take(m - j - 1));
        let proj: Vec<&str> = xs.iter().map(String::as_str).collect();
        out.push(Term::lams(&proj, Term::var(&xs[j])));
    }
    out.push(k());
    out
}

#[derive(Clone, Debug)]
pub struct Extraction {
    pub extracted: Term,
    /// `Bᵢ(s * (0⁺…⁺))`, which `extracted` reduces to.
    pub target: Term,
    pub join: Option<JoinWitness>,
    /// Approximants of `extracted` and of `Bᵢ` on the numeral of `s·m`
    /// agree to the given depth.
    pub bt_equal: bool,
}

/// Applies `Bᵢ s` to [`bohm_out_args`] and compares the result with `Bᵢ(s * m)`.
pub fn extraction_check(
    kit: &ConstructionKit,
    index: u8,
    code: u64,
    m: u64,
    depth: usize,
    fuel: usize,
) -> Result<Extraction, BarendregtError> {
    let b = kit.b(index).clone();
    let extracted = Term::apps(Term::app(b.clone(), church(code)), bohm_out_args(m));
    let fed = (0..m).fold(church(0), |n, _| Term::app(succ(), n));
    let target = Term::app(b.clone(), Term::apps(kit.concat.clone(), [church(code), fed]));
    let join = Engine::default().join(&extracted, &target, fuel);
    let direct = Term::app(b, church(kit.codec().concat(code, m)?));
    let bt_equal = approx_alpha_eq(&bt_approx(&extracted, depth, fuel), &bt_approx(&direct, depth, fuel));
    Ok(Extraction { extracted, target, join, bt_equal })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparationVerdict {
    /// The approximants differ at this depth.
    Separated(usize),
    /// Both sides are certified unsolvable.
    Identified,
    Inconclusive,
}

/// For a member `s`, compares `λz.B₀(s * z)` with `λz.B₁(s * z)`; for a
/// non-member, `B₀ s` with `B₁ s`.
pub fn separation_check(kit: &ConstructionKit, code: u64, depth: usize, fuel: usize) -> SeparationVerdict {
    let side = |index: u8| {
        if kit.tree.member_code(code) {
            kit.continuation(index, code)
        } else {
            Term::app(kit.b(index).clone(), church(code))
        }
    };
    let (a, b) = (bt_approx(&side(0), depth, fuel), bt_approx(&side(1), depth, fuel));
    let certified = BTNode::Bottom(BottomKind::Certified);
    if a == certified && b == certified {
        return SeparationVerdict::Identified;
    }
    match eta_bt_eq(&a, &b, depth) {
        BtEq::Different => SeparationVerdict::Separated(depth),
        _ => SeparationVerdict::Inconclusive,
    }
}

/// `(λz.Bᵢ(s * z)) m` has a head cycle.
pub fn leaf_check(kit: &ConstructionKit, index: u8, code: u64, m: u64, fuel: usize) -> bool {
    let t = Term::app(kit.continuation(index, code), church(m));
    solvability(&t, fuel).is_unsolvable()
}

#[cfg(test)]
mod tests {
    use super::super::{tree_from_spec, TreeSpec};
    use super::*;

    fn demo() -> ConstructionKit {
        ConstructionKit::build(tree_from_spec(TreeSpec::demo()).unwrap(), 14).unwrap()
    }

    #[test]
    fn box_and_d() {
        let kit = demo();
        for code in 0..15 {
            let member = kit.tree.member_code(code);
            let want = if member { k_star() } else { omega_big() };
            let b = box_trace(&kit, code, 10_000).unwrap();
            assert_eq!(b.end, want, "box {code}");
            let d = d_trace(&kit, code, 10_000).unwrap();
            assert_eq!(d.end, want, "D {code}");
            assert!(d.steps.iter().all(|s| s.rule == RuleTag::WeakBeta && s.position.0.iter().all(|&b| b == 0)));
            assert!(d.replay(false).is_ok());
        }
    }

    #[test]
    fn three_steps_to_the_abstraction() {
        let kit = demo();
        for index in 0..2 {
            let t = b_unfold(&kit, index, 10).unwrap();
            assert_eq!(t.len(), 3);
        }
    }

    #[test]
    fn pivot_and_countdown() {
        let kit = demo();
        let h = head_trace_b(&kit, 0, 0, 100_000).unwrap();
        assert!(h.member);
        assert_eq!(h.pivot(), Some(&kit.pivot(0, 0)));
        assert_eq!(h.countdown, vec![5, 4, 3, 2, 1]);
        assert_eq!(h.phase(Phase::Unfold), Some(0..4));
        assert_eq!(h.phase(Phase::ToPivot).map(|r| r.len()), Some(4));
        assert!(h.trace.replay(false).is_ok());
        let h = head_trace_b(&kit, 1, 7, 100_000).unwrap();
        assert!(!h.member);
        assert!(h.certificate.unwrap().verify());
    }

    #[test]
    fn zeta() {
        let kit = demo();
        let r = verify_zeta(&kit, &i(), 0, &k_star(), 5_000).unwrap();
        assert!(r.join.left.replay(false).is_ok() && r.join.right.replay(false).is_ok());
        assert!(verify_zeta(&kit, &k_star(), 1, &i(), 5_000).is_ok());
    }

    #[test]
    fn bohm_out_shapes() {
        assert_eq!(bohm_out_args(0), vec![i(), k()]);
        let a = bohm_out_args(2);
        assert_eq!(a.len(), 1 + 3 + 2 + 1);
        assert_eq!(a[0].to_string(), "\\x1 x2 z.z x1 x2");
    }

    #[test]
    fn separation() {
        let kit = demo();
        assert_eq!(separation_check(&kit, 0, 0, 2_000), SeparationVerdict::Inconclusive);
        assert_eq!(separation_check(&kit, 0, 1, 2_000), SeparationVerdict::Separated(1));
        assert_eq!(separation_check(&kit, 9, 1, 2_000), SeparationVerdict::Identified);
        assert!(leaf_check(&kit, 0, 3, 0, 2_000));
    }
}
