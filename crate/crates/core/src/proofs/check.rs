use super::{ord_of_proof, ConvKind, ProofNode, HOLE};
use crate::ordinals::hessenberg_sum;
use crate::ordinals::Ordinal;
use crate::reduction::head::{probe, Probe};
use crate::reduction::Engine;
use crate::term::{omega_big, Term};

#[derive(Clone, Debug)]
pub struct CheckConfig {
    /// Head steps for unsolvability certificates and reducts per join.
    pub fuel: usize,
    /// Accept `cert=asserted` on Ω-axioms.
    pub allow_asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// `at` is the route from the root, e.g. `root/left/sample[1]`.
    Invalid { at: String, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        *self == Verdict::Valid
    }
}

pub fn check_proof(p: &ProofNode, fuel: usize) -> Verdict {
    check_proof_with(p, &CheckConfig { fuel, allow_asserted: false })
}

pub fn check_proof_with(p: &ProofNode, cfg: &CheckConfig) -> Verdict {
    let mut engine = Engine::default();
    match node(p, cfg, &mut engine, "root") {
        Ok(()) => Verdict::Valid,
        Err((at, reason)) => Verdict::Invalid { at, reason },
    }
}

type Failure = (String, String);

fn fail<T>(at: &str, reason: impl Into<String>) -> Result<T, Failure> {
    Err((at.to_string(), reason.into()))
}

fn closed(t: &Term, at: &str, what: &str) -> Result<(), Failure> {
    if t.is_closed() {
        Ok(())
    } else {
        fail(at, format!("{what} is not closed: {t}"))
    }
}

fn unsolvable(m: &Term, cert: &Option<crate::reduction::Certificate>, cfg: &CheckConfig, at: &str) -> Result<(), Failure> {
    closed(m, at, "unsolvable side")?;
    let ok = match cert {
        Some(c) => c.confirms(m, cfg.allow_asserted),
        None => matches!(probe(m, cfg.fuel), Probe::Cycle(_)),
    };
    if ok {
        Ok(())
    } else {
        fail(at, format!("no unsolvability certificate for {m}"))
    }
}

fn node(p: &ProofNode, cfg: &CheckConfig, engine: &mut Engine, at: &str) -> Result<(), Failure> {
    match p {
        ProofNode::Identity(m) => closed(m, at, "term"),
        ProofNode::WeakConv { lhs, rhs, kind, cert } => {
            closed(lhs, at, "left side")?;
            closed(rhs, at, "right side")?;
            let (redex, reduct) = match kind {
                ConvKind::BetaContract => (lhs, rhs),
                ConvKind::BetaExpand => (rhs, lhs),
                ConvKind::ToOmega => {
                    if *rhs != omega_big() {
                        return fail(at, "right side of to-Omega is not Omega");
                    }
                    return unsolvable(lhs, cert, cfg, at);
                }
                ConvKind::FromOmega => {
                    if *lhs != omega_big() {
                        return fail(at, "left side of from-Omega is not Omega");
                    }
                    return unsolvable(rhs, cert, cfg, at);
                }
            };
            if !redex.is_beta_redex() {
                return fail(at, format!("{redex} is not a beta-redex"));
            }
            if redex.contract() != *reduct {
                return fail(at, format!("{reduct} is not the contractum of {redex}"));
            }
            Ok(())
        }
        ProofNode::Leibnitz { x, y, m, n, left, right } => {
            for c in [x, y] {
                if c.free_vars().iter().any(|v| v != HOLE) {
                    return fail(at, format!("context {c} has free variables besides {HOLE}"));
                }
            }
            closed(m, at, "M")?;
            closed(n, at, "N")?;
            let want_left = (x.substitute(HOLE, m), y.substitute(HOLE, m));
            if left.conclusion() != want_left {
                return fail(at, "left premise does not prove [M/z]X = [M/z]Y");
            }
            if right.conclusion() != (m.clone(), n.clone()) {
                return fail(at, "right premise does not prove M = N");
            }
            node(left, cfg, engine, &format!("{at}/left"))?;
            node(right, cfg, engine, &format!("{at}/right"))
        }
        ProofNode::Oracle { p: pp, q, samples, bound, .. } => {
            closed(pp, at, "P")?;
            closed(q, at, "Q")?;
            let mut sum = Ordinal::zero();
            for (i, s) in samples.iter().enumerate() {
                let here = format!("{at}/sample[{i}]");
                let (l, r) = s.conclusion();
                let ok = match (l.as_app(), r.as_app()) {
                    (Some((f, a)), Some((g, b))) => f == pp && g == q && a == b && a.is_closed(),
                    _ => false,
                };
                if !ok {
                    return fail(&here, "sample does not prove P A = Q A for a closed A");
                }
                node(s, cfg, engine, &here)?;
                if bound.is_some() {
                    match ord_of_proof(s) {
                        Ok(o) => sum = hessenberg_sum(&sum, &o),
                        Err(_) => return fail(&here, "sample has no ordinal while the node declares one"),
                    }
                }
            }
            if let Some(theta) = bound {
                if *theta <= sum {
                    return fail(at, format!("declared bound {theta} does not exceed the samples' sum {sum}"));
                }
            }
            Ok(())
        }
        ProofNode::Conversion(chain) => {
            if chain.is_empty() {
                return fail(at, "empty conversion chain");
            }
            for t in chain {
                closed(t, at, "chain term")?;
            }
            for (i, w) in chain.windows(2).enumerate() {
                if engine.join(&w[0], &w[1], cfg.fuel).is_none() {
                    return fail(at, format!("no common reduct for chain terms {i} and {} within fuel", i + 1));
                }
            }
            Ok(())
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

    fn valid(n: &ProofNode) -> bool {
        check_proof(n, 1000).is_valid()
    }

    #[test]
    fn axioms() {
        assert!(valid(&ProofNode::Identity(i())));
        assert!(!valid(&ProofNode::Identity(p("x"))));
        let contract = ProofNode::WeakConv { lhs: p("(\\x.x) $I"), rhs: i(), kind: ConvKind::BetaContract, cert: None };
        assert!(valid(&contract));
        let expand = ProofNode::WeakConv { lhs: i(), rhs: p("(\\x.x) $I"), kind: ConvKind::BetaExpand, cert: None };
        assert!(valid(&expand));
        let wrong = ProofNode::WeakConv { lhs: p("(\\x.x) $I"), rhs: k(), kind: ConvKind::BetaContract, cert: None };
        assert!(!valid(&wrong));
        let to = ProofNode::WeakConv { lhs: p("$Omega $I"), rhs: omega_big(), kind: ConvKind::ToOmega, cert: None };
        assert!(valid(&to));
        let bogus = ProofNode::WeakConv { lhs: i(), rhs: omega_big(), kind: ConvKind::ToOmega, cert: None };
        assert!(!valid(&bogus));
    }

    #[test]
    fn asserted_certificates_need_permission() {
        let growing = p("(\\x.x x x)(\\x.x x x)");
        let node = ProofNode::WeakConv {
            lhs: growing,
            rhs: omega_big(),
            kind: ConvKind::ToOmega,
            cert: Some(crate::reduction::Certificate::Asserted),
        };
        assert!(!check_proof(&node, 100).is_valid());
        let cfg = CheckConfig { fuel: 100, allow_asserted: true };
        assert!(check_proof_with(&node, &cfg).is_valid());
    }

    #[test]
    fn leibnitz_transitivity() {
        // M = A, A = B gives M = B with X = M, Y = z.
        let m = p("(\\x.x) ((\\y.y) $I)");
        let a = p("(\\y.y) $I");
        let left = ProofNode::WeakConv { lhs: m.clone(), rhs: a.clone(), kind: ConvKind::BetaContract, cert: None };
        let right = ProofNode::WeakConv { lhs: a.clone(), rhs: i(), kind: ConvKind::BetaContract, cert: None };
        let t = ProofNode::leibnitz(m.clone(), Term::var(HOLE), a, i(), left, right);
        assert!(valid(&t));
        assert_eq!(t.conclusion(), (m, i()));
    }

    #[test]
    fn broken_leibnitz_reports_where() {
        let left = ProofNode::Identity(i());
        let right = ProofNode::Identity(k());
        let t = ProofNode::leibnitz(Term::var(HOLE), Term::var(HOLE), i(), k(), left, right);
        let Verdict::Invalid { at, .. } = check_proof(&t, 10) else { panic!() };
        assert_eq!(at, "root");
    }

    #[test]
    fn oracle_samples_and_bound() {
        let s = |a: Term| ProofNode::WeakConv {
            lhs: Term::app(i(), a.clone()),
            rhs: Term::app(p("\\x.$I x"), a),
            kind: ConvKind::BetaExpand,
            cert: None,
        };
        let mk = |bound: &str| ProofNode::Oracle {
            p: i(),
            q: p("\\x.$I x"),
            samples: vec![s(k()), s(k_star())],
            bound: Some(bound.parse().unwrap()),
            justification: "eta".into(),
        };
        assert!(valid(&mk("3")));
        assert!(!valid(&mk("2")));
        assert!(valid(&mk("w")));
    }

    #[test]
    fn conversion_chains() {
        assert!(valid(&ProofNode::Conversion(vec![p("$K $I $Omega"), i(), p("$I $I")])));
        assert!(!valid(&ProofNode::Conversion(vec![k(), k_star()])));
    }
}
