//! The terms of the construction.
//!
//! ```text
//! TAIL  = λp.p K*
//! TABLE = [A₀, [A₁, … [A_N, Ω]]]        Aₖ = K* if k ∈ T, else Ω
//! □     = λx.x TAIL TABLE K
//! D     = λx.x I I Y                     Y = guarded body of □ on x
//! *     = λs z.z I I (λf x.s (λy.f^B y) (z f (f x)))
//! Z     = Θ (λa x f.[f x, x (λu.uΩ) y (a x⁺ f)])
//! Fᵢ    = λw x y.D x ī Θ½ Θ½ U 0 (λz.w (x * z))
//! Bᵢ    = Θ Fᵢ
//! ```
//!
//! `n TAIL TABLE` drops `n` entries of the table, and applying the rest to
//! `K` picks the head entry.

use crate::term::{church, i, k, k_star, omega_big, succ, theta, theta_half, tuple, Kind, Term};

use super::{BarendregtError, Codec, TreeOracle};

/// Largest accepted domain bound.
pub const MAX_DOMAIN: u64 = 4096;

fn v(n: &str) -> Term {
    Term::var(n)
}

/// The Church numeral of a code.
pub fn numeral_of(code: u64) -> Term {
    church(code)
}

/// Replaces, innermost first, every β-redex `(λz.Z)W` by `guard I I (λz.Z) W`.
pub fn guard_redexes(t: &Term, guard: &str) -> Term {
    match t.kind() {
        Kind::Free(_) | Kind::Bound(_) => t.clone(),
        Kind::Lam(h, b) => Term::lam_raw(h.clone(), guard_redexes(b, guard)),
        Kind::App(f, a) => {
            let (f, a) = (guard_redexes(f, guard), guard_redexes(a, guard));
            if f.is_lam() {
                Term::apps(v(guard), [i(), i(), f, a])
            } else {
                Term::app(f, a)
            }
        }
    }
}

fn tail() -> Term {
    Term::lam("p", Term::app(v("p"), k_star()))
}

fn table(tree: &TreeOracle, bound: u64) -> Term {
    (0..=bound).rev().fold(omega_big(), |rest, code| {
        let entry = if tree.member_code(code) { k_star() } else { omega_big() };
        tuple(&[entry, rest])
    })
}

fn check_bound(bound: u64) -> Result<(), BarendregtError> {
    if bound > MAX_DOMAIN {
        return Err(BarendregtError::DomainTooLarge { bound, limit: MAX_DOMAIN });
    }
    Ok(())
}

fn box_body(tree: &TreeOracle, bound: u64) -> Term {
    Term::apps(v("x"), [tail(), table(tree, bound), k()])
}

/// `□ s →* K*` for members and `→* Ω` otherwise, for codes up to `bound`.
pub fn build_box(tree: &TreeOracle, bound: u64) -> Result<Term, BarendregtError> {
    check_bound(bound)?;
    Ok(Term::lam("x", box_body(tree, bound)))
}

/// `D x m` is a normal form headed by `x`, and `D s` head-reduces like `□ s`.
pub fn build_d(tree: &TreeOracle, bound: u64) -> Result<Term, BarendregtError> {
    check_bound(bound)?;
    let y = guard_redexes(&box_body(tree, bound), "x");
    Ok(Term::lam("x", Term::apps(v("x"), [i(), i(), y])))
}

/// `s * m` for base `base`.
pub fn build_concat(base: u64) -> Term {
    let f_b = (0..base).fold(v("y"), |acc, _| Term::app(v("f"), acc));
    let inner = Term::lams(
        &["f", "x"],
        Term::apps(
            v("s"),
            [Term::lam("y", f_b), Term::apps(v("z"), [v("f"), Term::app(v("f"), v("x"))])],
        ),
    );
    Term::lams(&["s", "z"], Term::apps(v("z"), [i(), i(), inner]))
}

/// `λa x f.[f x, x (λu.uΩ) y (a x⁺ f)]`, with `y` free.
fn build_u() -> Term {
    let first = Term::app(v("f"), v("x"));
    let second = Term::apps(
        v("x"),
        [
            Term::lam("u", Term::app(v("u"), omega_big())),
            v("y"),
            Term::apps(v("a"), [Term::app(succ(), v("x")), v("f")]),
        ],
    );
    Term::lams(&["a", "x", "f"], tuple(&[first, second]))
}

/// All terms of the construction for one tree and domain bound.
#[derive(Clone, Debug)]
pub struct ConstructionKit {
    pub tree: TreeOracle,
    pub domain_bound: u64,
    pub box_term: Term,
    pub d: Term,
    pub concat: Term,
    pub u: Term,
    pub z: Term,
    pub f0: Term,
    pub f1: Term,
    pub b0: Term,
    pub b1: Term,
}

impl ConstructionKit {
    pub fn build(tree: TreeOracle, domain_bound: u64) -> Result<ConstructionKit, BarendregtError> {
        let box_term = build_box(&tree, domain_bound)?;
        let d = build_d(&tree, domain_bound)?;
        let concat = build_concat(tree.codec().base());
        let u = build_u();
        let z = Term::app(theta(), u.clone());
        let f = |index: u64| {
            let cont = Term::lam(
                "z",
                Term::app(v("w"), Term::apps(concat.clone(), [v("x"), v("z")])),
            );
            let body = Term::apps(
                d.clone(),
                [v("x"), church(index), theta_half(), theta_half(), u.clone(), church(0), cont],
            );
            Term::lams(&["w", "x", "y"], body)
        };
        let (f0, f1) = (f(0), f(1));
        let b0 = Term::app(theta(), f0.clone());
        let b1 = Term::app(theta(), f1.clone());
        Ok(ConstructionKit { tree, domain_bound, box_term, d, concat, u, z, f0, f1, b0, b1 })
    }

    pub fn codec(&self) -> Codec {
        self.tree.codec()
    }

    pub fn f(&self, index: u8) -> &Term {
        if index == 0 { &self.f0 } else { &self.f1 }
    }

    pub fn b(&self, index: u8) -> &Term {
        if index == 0 { &self.b0 } else { &self.b1 }
    }

    /// `λz.w (x * z)` with `x` the numeral of `code` and `w = Bᵢ`.
    pub fn continuation(&self, index: u8, code: u64) -> Term {
        Term::lam(
            "z",
            Term::app(self.b(index).clone(), Term::apps(self.concat.clone(), [church(code), v("z")])),
        )
    }

    /// `[P/y]Z`.
    pub fn z_with(&self, p: &Term) -> Term {
        self.z.substitute("y", p)
    }

    /// The tail of the head reduction of `Bᵢ s` past the D-phase: `D s`
    /// replaced by `head`.
    pub fn after_d(&self, index: u8, code: u64, head: Term) -> Term {
        Term::lam(
            "y",
            Term::apps(
                head,
                [church(u64::from(index)), theta_half(), theta_half(), self.u.clone(), church(0), self.continuation(index, code)],
            ),
        )
    }

    /// `λy.[W 0, 0 (λu.uΩ) y (Z 0⁺ W)]` with `W = λz.Bᵢ(s * z)`.
    pub fn pivot(&self, index: u8, code: u64) -> Term {
        let w = self.continuation(index, code);
        let second = Term::apps(
            church(0),
            [
                Term::lam("u", Term::app(v("u"), omega_big())),
                v("y"),
                Term::apps(self.z.clone(), [Term::app(succ(), church(0)), w.clone()]),
            ],
        );
        Term::lam("y", tuple(&[Term::app(w, church(0)), second]))
    }
}
