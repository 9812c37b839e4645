//! Normal-form endpieces.
//!
//! A proof of `M = N` is in normal form when it has the shape
//!
//! ```text
//! M ∼ M₁P₁,  M₁P₁ = M₁Q₁ (ω-rule),  M₁Q₁ ∼ M₂P₂,  …,  MₜQₜ ∼ N
//! ```
//!
//! where each `∼` is a conversion chain. As a tree it is a left spine of
//! Leibnitz nodes over `Identity(M)`: a transitivity node `X = M, Y = z`
//! appends a conversion chain, and a context node `X = M, Y = Mᵢ z` appends
//! an ω-rule conclusion under the applicative context `Mᵢ`.

use super::{ProofError, ProofNode, HOLE};
use crate::term::{i, Term};

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    /// The closed context `Mᵢ`.
    pub context: Term,
    /// The ω-rule node proving `Pᵢ = Qᵢ`.
    pub oracle: ProofNode,
}

impl Row {
    fn sides(&self) -> (Term, Term) {
        self.oracle.conclusion()
    }

    fn before(&self) -> Term {
        Term::app(self.context.clone(), self.sides().0)
    }

    fn after(&self) -> Term {
        Term::app(self.context.clone(), self.sides().1)
    }
}

/// `links.len() == rows.len() + 1`; `links[i]` ends at `rows[i].before()`
/// and `links[i + 1]` starts at `rows[i].after()`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub links: Vec<Vec<Term>>,
    pub rows: Vec<Row>,
}

fn hole() -> Term {
    Term::var(HOLE)
}

fn dedup(chain: &mut Vec<Term>) {
    chain.dedup_by(|a, b| a == b);
}

impl NormalForm {
    pub fn start(&self) -> &Term {
        &self.links[0][0]
    }

    pub fn end(&self) -> &Term {
        self.links.last().and_then(|l| l.last()).expect("nonempty links")
    }

    /// Number of ω-rule rows.
    pub fn t(&self) -> usize {
        self.rows.len()
    }

    fn size(&self) -> usize {
        self.links.iter().map(|l| l.len()).sum::<usize>() + self.rows.len()
    }

    pub fn from_proof(p: &ProofNode) -> Option<NormalForm> {
        if let ProofNode::Identity(m) = p {
            return Some(NormalForm { links: vec![vec![m.clone()]], rows: vec![] });
        }
        let (_, links, rows, ends_with_link) = spine(p)?;
        ends_with_link.then_some(NormalForm { links, rows })
    }

    pub fn into_proof(self) -> ProofNode {
        let m = self.start().clone();
        if self.rows.is_empty() && self.links[0].len() == 1 {
            return ProofNode::Identity(m);
        }
        let mut acc = ProofNode::Identity(m.clone());
        let mut rows = self.rows.into_iter();
        for link in self.links {
            let (a, b) = (link[0].clone(), link.last().expect("nonempty").clone());
            acc = ProofNode::leibnitz(m.clone(), hole(), a, b, acc, ProofNode::Conversion(link));
            if let Some(row) = rows.next() {
                let (pp, q) = row.sides();
                let y = Term::app(row.context.clone(), hole());
                acc = ProofNode::leibnitz(m.clone(), y, pp, q, acc, row.oracle);
            }
        }
        acc
    }

    pub fn reversed(&self) -> NormalForm {
        let links = self
            .links
            .iter()
            .rev()
            .map(|l| l.iter().rev().cloned().collect())
            .collect();
        let rows = self
            .rows
            .iter()
            .rev()
            .map(|r| Row { context: r.context.clone(), oracle: reverse_proof(&r.oracle) })
            .collect();
        NormalForm { links, rows }
    }

    pub fn splice(&self, other: &NormalForm) -> Result<NormalForm, ProofError> {
        if self.end() != other.start() {
            return Err(ProofError::MiddleMismatch);
        }
        let mut links = self.links.clone();
        let last = links.last_mut().expect("nonempty links");
        last.extend(other.links[0].iter().skip(1).cloned());
        dedup(last);
        links.extend(other.links.iter().skip(1).cloned());
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(NormalForm { links, rows })
    }

    /// Moves the whole computation into the context `X`, whose only free
    /// variable is `z`. Context `Mᵢ` becomes `λu.(λz.X)(Mᵢ u)`.
    pub fn lift(&self, x: &Term) -> Result<NormalForm, ProofError> {
        if x.free_vars().iter().any(|v| v != HOLE) {
            return Err(ProofError::BadContext);
        }
        let sub = |c: &Term| x.substitute(HOLE, c);
        let abs = Term::lam(HOLE, x.clone());
        let cx = |m: &Term| Term::lam("u", Term::app(abs.clone(), Term::app(m.clone(), Term::var("u"))));
        let t = self.rows.len();
        let mut links = Vec::with_capacity(t + 1);
        for (k, link) in self.links.iter().enumerate() {
            let mut chain = Vec::new();
            if k > 0 {
                let row = &self.rows[k - 1];
                chain.push(Term::app(cx(&row.context), row.sides().1));
                chain.push(Term::app(abs.clone(), row.after()));
            }
            chain.extend(link.iter().map(sub));
            if k < t {
                let row = &self.rows[k];
                chain.push(Term::app(abs.clone(), row.before()));
                chain.push(Term::app(cx(&row.context), row.sides().0));
            }
            dedup(&mut chain);
            links.push(chain);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| Row { context: cx(&r.context), oracle: r.oracle.clone() })
            .collect();
        Ok(NormalForm { links, rows })
    }
}

type Spine = (Term, Vec<Vec<Term>>, Vec<Row>, bool);

fn current_end(start: &Term, links: &[Vec<Term>], rows: &[Row], ends_with_link: bool) -> Term {
    if ends_with_link {
        links.last().and_then(|l| l.last()).expect("nonempty link").clone()
    } else {
        rows.last().map(|r| r.after()).unwrap_or_else(|| start.clone())
    }
}

fn spine(p: &ProofNode) -> Option<Spine> {
    match p {
        ProofNode::Identity(m) => Some((m.clone(), vec![], vec![], false)),
        ProofNode::Leibnitz { x, y, m, n, left, right } => {
            let (start, mut links, mut rows, ends_with_link) = spine(left)?;
            if *x != start {
                return None;
            }
            let end = current_end(&start, &links, &rows, ends_with_link);
            match right.as_ref() {
                ProofNode::Conversion(chain) if *y == hole() && !ends_with_link => {
                    if chain.first() != Some(m) || chain.last() != Some(n) || end != *m {
                        return None;
                    }
                    links.push(chain.clone());
                    Some((start, links, rows, true))
                }
                ProofNode::Oracle { p: pp, q, .. } if ends_with_link => {
                    let (ctx, arg) = y.as_app()?;
                    if *arg != hole() || !ctx.is_closed() || pp != m || q != n {
                        return None;
                    }
                    if end != Term::app(ctx.clone(), pp.clone()) {
                        return None;
                    }
                    rows.push(Row { context: ctx.clone(), oracle: right.as_ref().clone() });
                    Some((start, links, rows, false))
                }
                _ => None,
            }
        }
        _ => None,
    }
}

pub fn is_normal_form(p: &ProofNode) -> bool {
    NormalForm::from_proof(p).is_some()
}

/// A proof of `N = M` from a proof of `M = N`. Normal forms stay normal.
pub fn reverse_proof(p: &ProofNode) -> ProofNode {
    if let Some(nf) = NormalForm::from_proof(p) {
        return nf.reversed().into_proof();
    }
    match p {
        ProofNode::Identity(_) => p.clone(),
        ProofNode::WeakConv { lhs, rhs, kind, cert } => ProofNode::WeakConv {
            lhs: rhs.clone(),
            rhs: lhs.clone(),
            kind: kind.flip(),
            cert: cert.clone(),
        },
        ProofNode::Leibnitz { x, y, m, n, left, right } => ProofNode::Leibnitz {
            x: y.clone(),
            y: x.clone(),
            m: m.clone(),
            n: n.clone(),
            left: Box::new(reverse_proof(left)),
            right: right.clone(),
        },
        ProofNode::Oracle { p: pp, q, samples, bound, justification } => ProofNode::Oracle {
            p: q.clone(),
            q: pp.clone(),
            samples: samples.iter().map(reverse_proof).collect(),
            bound: bound.clone(),
            justification: justification.clone(),
        },
        ProofNode::Conversion(chain) => ProofNode::Conversion(chain.iter().rev().cloned().collect()),
    }
}

/// Joins normal-form proofs of `M = N` and `N = P` into one of `M = P`.
pub fn splice_transitivity(p_mn: &ProofNode, p_np: &ProofNode) -> Result<ProofNode, ProofError> {
    let a = NormalForm::from_proof(p_mn).ok_or(ProofError::NotNormalForm)?;
    let b = NormalForm::from_proof(p_np).ok_or(ProofError::NotNormalForm)?;
    Ok(a.splice(&b)?.into_proof())
}

/// From a normal-form proof of `M = N`, one of `[M/z]X = [N/z]X` with the
/// same number of ω-rule rows.
pub fn lift_context(p: &ProofNode, x: &Term) -> Result<ProofNode, ProofError> {
    let nf = NormalForm::from_proof(p).ok_or(ProofError::NotNormalForm)?;
    Ok(nf.lift(x)?.into_proof())
}

/// Rewrites the endpiece of a valid proof into normal form. `fuel` bounds
/// the number of terms and rows in the result.
pub fn normalize_endpiece(p: &ProofNode, fuel: usize) -> Result<ProofNode, ProofError> {
    Ok(normalize(p, fuel)?.into_proof())
}

fn normalize(p: &ProofNode, fuel: usize) -> Result<NormalForm, ProofError> {
    let nf = match p {
        ProofNode::Identity(m) => NormalForm { links: vec![vec![m.clone()]], rows: vec![] },
        ProofNode::WeakConv { lhs, rhs, .. } => NormalForm { links: vec![vec![lhs.clone(), rhs.clone()]], rows: vec![] },
        ProofNode::Conversion(chain) => NormalForm { links: vec![chain.clone()], rows: vec![] },
        ProofNode::Oracle { p: pp, q, .. } => NormalForm {
            links: vec![vec![pp.clone(), Term::app(i(), pp.clone())], vec![Term::app(i(), q.clone()), q.clone()]],
            rows: vec![Row { context: i(), oracle: p.clone() }],
        },
        ProofNode::Leibnitz { x, y, left, right, .. } => {
            let r = normalize(right, fuel)?;
            let l = normalize(left, fuel)?;
            // A context without the hole needs no rows.
            let lift = |nf: NormalForm, c: &Term| {
                if c.has_free(HOLE) {
                    nf.lift(c)
                } else {
                    Ok(NormalForm { links: vec![vec![c.clone()]], rows: vec![] })
                }
            };
            let before = lift(r.reversed(), x)?;
            let after = lift(r, y)?;
            before.splice(&l)?.splice(&after)?
        }
    };
    if nf.size() > fuel {
        return Err(ProofError::FuelExhausted);
    }
    Ok(nf)
}
