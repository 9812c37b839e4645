use std::collections::{HashMap, VecDeque};

use super::engine::Engine;
use super::{ReductionTrace, RuleTag};
use crate::term::Term;

/// Reducts above this size are dropped from the search.
const SIZE_CAP: usize = 1 << 16;

/// Most normal-order steps taken before the breadth-first search. Each step
/// re-probes the closed subterms along its path, so long trajectories into
/// an infinite unfolding cost quadratic time.
const NORMAL_ORDER_CAP: usize = 4096;

/// A common weak βΩ-reduct with the reductions leading to it.
#[derive(Clone, Debug)]
pub struct JoinWitness {
    pub common: Term,
    pub left: ReductionTrace,
    pub right: ReductionTrace,
}

type Parent = Option<(Term, Vec<u8>, RuleTag)>;

struct Side {
    seen: HashMap<Term, Parent>,
    order: Vec<Term>,
}

impl Side {
    fn new(t: &Term) -> Side {
        let mut seen = HashMap::new();
        seen.insert(t.clone(), None);
        Side { seen, order: vec![t.clone()] }
    }

    fn add(&mut self, t: Term, parent: Parent) -> bool {
        if self.seen.contains_key(&t) {
            return false;
        }
        self.seen.insert(t.clone(), parent);
        self.order.push(t);
        true
    }

    fn moves_to(&self, t: &Term) -> (Term, Vec<(Vec<u8>, RuleTag)>) {
        let mut moves = Vec::new();
        let mut cur = t.clone();
        while let Some(Some((parent, path, rule))) = self.seen.get(&cur) {
            moves.push((path.clone(), *rule));
            cur = parent.clone();
        }
        moves.reverse();
        (cur, moves)
    }
}

/// Searches for a common weak βΩ-reduct of `a` and `b`. `fuel` bounds the
/// number of reducts generated.
pub fn join(a: &Term, b: &Term, fuel: usize) -> Option<JoinWitness> {
    Engine::default().join(a, b, fuel)
}

impl Engine {
    /// First follows the leftmost-outermost reduction of both sides for at
    /// most half the fuel and `NORMAL_ORDER_CAP` steps, then
    /// falls back to a breadth-first search from everything seen so far.
    pub fn join(&mut self, a: &Term, b: &Term, fuel: usize) -> Option<JoinWitness> {
        let mut sides = [Side::new(a), Side::new(b)];
        if a == b {
            return Some(self.witness(&sides, a));
        }
        let mut fuel = fuel;
        let mut cur = [a.clone(), b.clone()];
        let mut alive = [true, true];
        let mut budget = (fuel / 2).min(NORMAL_ORDER_CAP);
        while budget > 0 && (alive[0] || alive[1]) {
            for s in 0..2 {
                if !alive[s] || budget == 0 {
                    continue;
                }
                budget -= 1;
                fuel -= 1;
                let Some(step) = self.normal_step(&cur[s]) else {
                    alive[s] = false;
                    continue;
                };
                let parent = Some((cur[s].clone(), step.path, step.rule));
                if step.result.size() > SIZE_CAP || !sides[s].add(step.result.clone(), parent) {
                    alive[s] = false;
                    continue;
                }
                if sides[1 - s].seen.contains_key(&step.result) {
                    return Some(self.witness(&sides, &step.result));
                }
                cur[s] = step.result;
            }
        }

        let mut queues: [VecDeque<Term>; 2] =
            [sides[0].order.iter().cloned().collect(), sides[1].order.iter().cloned().collect()];
        while fuel > 0 {
            let s = match (queues[0].is_empty(), queues[1].is_empty()) {
                (true, true) => return None,
                (false, true) => 0,
                (true, false) => 1,
                (false, false) => usize::from(queues[1].len() < queues[0].len()),
            };
            let t = queues[s].pop_front().expect("nonempty queue");
            for step in self.weak_steps(&t) {
                if fuel == 0 {
                    break;
                }
                fuel -= 1;
                if step.result.size() > SIZE_CAP {
                    continue;
                }
                let parent = Some((t.clone(), step.path, step.rule));
                if !sides[s].add(step.result.clone(), parent) {
                    continue;
                }
                if sides[1 - s].seen.contains_key(&step.result) {
                    return Some(self.witness(&sides, &step.result));
                }
                queues[s].push_back(step.result);
            }
        }
        None
    }

    fn witness(&mut self, sides: &[Side; 2], common: &Term) -> JoinWitness {
        let (la, lm) = sides[0].moves_to(common);
        let (rb, rm) = sides[1].moves_to(common);
        let left = self.trace_from_moves(&la, &lm);
        let right = self.trace_from_moves(&rb, &rm);
        JoinWitness { common: common.clone(), left, right }
    }
}
