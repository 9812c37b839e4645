//! Böhm-tree approximants and their comparison up to η.

use std::collections::BTreeSet;
use std::fmt;

use crate::reduction::head::{probe, Probe};
use crate::term::{fresh_name, Kind, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BottomKind {
    /// Head reduction revisited a term.
    Certified,
    /// The head-reduction budget ran out.
    Unknown,
    /// Below the requested depth.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BTNode {
    Bottom(BottomKind),
    Head { binders: Vec<String>, head: String, children: Vec<BTNode> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BtEq {
    Equal,
    Different,
    Inconclusive,
}

/// Approximates the Böhm tree of `t`. Nodes at depth `depth` keep their
/// arity but their children are truncated. Each node gets `fuel` head steps.
pub fn bt_approx(t: &Term, depth: usize, fuel: usize) -> BTNode {
    let mut scope: Vec<String> = Vec::new();
    let free = t.free_vars();
    approx(t, depth, fuel, &free, &mut scope)
}

fn approx(t: &Term, depth: usize, fuel: usize, free: &BTreeSet<String>, scope: &mut Vec<String>) -> BTNode {
    let hnf = match probe(t, fuel) {
        Probe::Hnf(steps) => steps.last().map(|(_, n)| n.clone()).unwrap_or_else(|| t.clone()),
        Probe::Cycle(_) => return BTNode::Bottom(BottomKind::Certified),
        Probe::Unknown => return BTNode::Bottom(BottomKind::Unknown),
    };
    let mark = scope.len();
    let mut binders = Vec::new();
    let mut body = hnf;
    while let Kind::Lam(hint, b) = body.kind() {
        let name = fresh_name(hint, |n| free.contains(n) || scope.iter().any(|s| s == n));
        let opened = b.instantiate(&Term::var(&name));
        scope.push(name.clone());
        binders.push(name);
        body = opened;
    }
    let (head, args) = body.spine();
    let head = head.as_var().expect("head normal form has a variable head").to_string();
    let children = args
        .into_iter()
        .map(|a| {
            if depth == 0 {
                BTNode::Bottom(BottomKind::Truncated)
            } else {
                approx(a, depth - 1, fuel, free, scope)
            }
        })
        .collect();
    scope.truncate(mark);
    BTNode::Head { binders, head, children }
}

#[derive(PartialEq)]
enum Var<'a> {
    Bound(usize),
    Free(&'a str),
}

fn resolve<'a>(env: &[(String, usize)], name: &'a str) -> Var<'a> {
    match env.iter().rev().find(|(n, _)| n == name) {
        Some((_, l)) => Var::Bound(*l),
        None => Var::Free(name),
    }
}

fn combine(a: BtEq, b: BtEq) -> BtEq {
    match (a, b) {
        (BtEq::Different, _) | (_, BtEq::Different) => BtEq::Different,
        (BtEq::Inconclusive, _) | (_, BtEq::Inconclusive) => BtEq::Inconclusive,
        _ => BtEq::Equal,
    }
}

/// Compares two approximants down to `depth`, η-expanding the side with
/// fewer binders. `Different` is reported only for disagreements that no
/// η-expansion repairs and that touch no unknown part of either tree.
pub fn eta_bt_eq(a: &BTNode, b: &BTNode, depth: usize) -> BtEq {
    cmp(a, &mut Vec::new(), b, &mut Vec::new(), 0, depth)
}

fn pad_name(level: usize) -> String {
    format!("#{level}")
}

fn cmp(
    a: &BTNode,
    ea: &mut Vec<(String, usize)>,
    b: &BTNode,
    eb: &mut Vec<(String, usize)>,
    level: usize,
    depth: usize,
) -> BtEq {
    use BottomKind::*;
    match (a, b) {
        (BTNode::Bottom(Certified), BTNode::Bottom(Certified)) => BtEq::Equal,
        (BTNode::Bottom(_), BTNode::Bottom(_)) => BtEq::Inconclusive,
        (BTNode::Bottom(Certified), BTNode::Head { .. }) | (BTNode::Head { .. }, BTNode::Bottom(Certified)) => {
            BtEq::Different
        }
        (BTNode::Bottom(_), _) | (_, BTNode::Bottom(_)) => BtEq::Inconclusive,
        (
            BTNode::Head { binders: xa, head: ha, children: ca },
            BTNode::Head { binders: xb, head: hb, children: cb },
        ) => {
            let (na, nb) = (xa.len(), xb.len());
            if na as i64 - ca.len() as i64 != nb as i64 - cb.len() as i64 {
                return BtEq::Different;
            }
            let n = na.max(nb);
            let (ma, mb) = (ea.len(), eb.len());
            let bind = |env: &mut Vec<(String, usize)>, names: &[String]| {
                for (i, x) in names.iter().enumerate() {
                    env.push((x.clone(), level + i));
                }
                for l in names.len()..n {
                    env.push((pad_name(level + l), level + l));
                }
            };
            bind(ea, xa);
            bind(eb, xb);
            let same_head = resolve(ea, ha) == resolve(eb, hb);
            let mut out = if same_head { BtEq::Equal } else { BtEq::Different };
            if same_head && depth > 0 {
                let eta = |l: usize| BTNode::Head { binders: vec![], head: pad_name(level + l), children: vec![] };
                let ext_a: Vec<BTNode> = (na..n).map(eta).collect();
                let ext_b: Vec<BTNode> = (nb..n).map(eta).collect();
                let ka = ca.iter().chain(ext_a.iter());
                let kb = cb.iter().chain(ext_b.iter());
                for (x, y) in ka.zip(kb) {
                    out = combine(out, cmp(x, ea, y, eb, level + n, depth - 1));
                    if out == BtEq::Different {
                        break;
                    }
                }
            }
            ea.truncate(ma);
            eb.truncate(mb);
            out
        }
    }
}

/// Equality of approximants up to renaming of binders. Unknown bottoms
/// never match; truncated ones match each other.
pub fn approx_alpha_eq(a: &BTNode, b: &BTNode) -> bool {
    fn go(a: &BTNode, ea: &mut Vec<(String, usize)>, b: &BTNode, eb: &mut Vec<(String, usize)>) -> bool {
        match (a, b) {
            (BTNode::Bottom(BottomKind::Unknown), _) | (_, BTNode::Bottom(BottomKind::Unknown)) => false,
            (BTNode::Bottom(x), BTNode::Bottom(y)) => x == y,
            (
                BTNode::Head { binders: xa, head: ha, children: ca },
                BTNode::Head { binders: xb, head: hb, children: cb },
            ) => {
                if xa.len() != xb.len() || ca.len() != cb.len() {
                    return false;
                }
                let (ma, mb) = (ea.len(), eb.len());
                for (l, (x, y)) in xa.iter().zip(xb).enumerate() {
                    ea.push((x.clone(), ma + l));
                    eb.push((y.clone(), mb + l));
                }
                let ok = resolve(ea, ha) == resolve(eb, hb) && ca.iter().zip(cb).all(|(x, y)| go(x, ea, y, eb));
                ea.truncate(ma);
                eb.truncate(mb);
                ok
            }
            _ => false,
        }
    }
    go(a, &mut Vec::new(), b, &mut Vec::new())
}

impl BTNode {
    pub fn is_bottom(&self) -> bool {
        matches!(self, BTNode::Bottom(_))
    }

    /// Depth of the deepest head node, root at 0; `None` for a bottom.
    pub fn height(&self) -> Option<usize> {
        match self {
            BTNode::Bottom(_) => None,
            BTNode::Head { children, .. } => {
                Some(children.iter().filter_map(|c| c.height()).map(|h| h + 1).max().unwrap_or(0))
            }
        }
    }
}

impl fmt::Display for BTNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BTNode::Bottom(BottomKind::Certified) => f.write_str("(bot certified)"),
            BTNode::Bottom(BottomKind::Unknown) => f.write_str("(bot unknown)"),
            BTNode::Bottom(BottomKind::Truncated) => f.write_str("(bot truncated)"),
            BTNode::Head { binders, head, children } => {
                write!(f, "(hn ({}) {head}", binders.join(" "))?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}
