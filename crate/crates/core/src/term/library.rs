//! Standard combinators and notations.

use std::sync::OnceLock;

use super::Term;

fn v(n: &str) -> Term {
    Term::var(n)
}

fn cached(cell: &'static OnceLock<Term>, build: fn() -> Term) -> Term {
    cell.get_or_init(build).clone()
}

/// `λx.x`
pub fn i() -> Term {
    static C: OnceLock<Term> = OnceLock::new();
    cached(&C, || Term::lam("x", v("x")))
}

/// `λab.a`
pub fn k() -> Term {
    static C: OnceLock<Term> = OnceLock::new();
    cached(&C, || Term::lams(&["a", "b"], v("a")))
}

/// `λab.b`
pub fn k_star() -> Term {
    static C: OnceLock<Term> = OnceLock::new();
    cached(&C, || Term::lams(&["a", "b"], v("b")))
}

/// `λx.xx`
pub fn omega_small() -> Term {
    static C: OnceLock<Term> = OnceLock::new();
    cached(&C, || Term::lam("x", Term::app(v("x"), v("x"))))
}

/// `Ω ≡ ωω`
pub fn omega_big() -> Term {
    static C: OnceLock<Term> = OnceLock::new();
    cached(&C, || Term::app(omega_small(), omega_small()))
}

/// `λab.b(aab)`, the half of Θ.
pub fn theta_half() -> Term {
    static C: OnceLock<Term> = OnceLock::new();
    cached(&C, || {
        Term::lams(
            &["a", "b"],
            Term::app(v("b"), Term::apps(v("a"), [v("a"), v("b")])),
        )
    })
}

/// Turing's fixed point combinator `(λab.b(aab))(λab.b(aab))`.
pub fn theta() -> Term {
    static C: OnceLock<Term> = OnceLock::new();
    cached(&C, || Term::app(theta_half(), theta_half()))
}

/// `λn f x.f(n f x)`
pub fn succ() -> Term {
    static C: OnceLock<Term> = OnceLock::new();
    cached(&C, || {
        Term::lams(
            &["n", "f", "x"],
            Term::app(v("f"), Term::apps(v("n"), [v("f"), v("x")])),
        )
    })
}

/// The Church numeral `λf x.fᵏ x`.
pub fn church(k: u64) -> Term {
    let mut body = v("x");
    for _ in 0..k {
        body = Term::app(v("f"), body);
    }
    Term::lams(&["f", "x"], body)
}

/// The value of a Church numeral, if `t` is one.
pub fn church_value(t: &Term) -> Option<u64> {
    let (f, b) = t.as_lam()?;
    let (x, mut body) = b.as_lam()?;
    if f == x {
        return None;
    }
    let mut n = 0;
    loop {
        if body.as_var() == Some(x.as_str()) {
            return Some(n);
        }
        let (g, a) = body.as_app()?;
        if g.as_var() != Some(f.as_str()) {
            return None;
        }
        body = a.clone();
        n += 1;
    }
}

/// `[M₁,…,Mₙ] ≡ λz.z M₁ … Mₙ`, with `z` chosen fresh.
pub fn tuple(ms: &[Term]) -> Term {
    let taken: Vec<_> = ms.iter().map(|m| m.free_vars()).collect();
    let z = super::fresh_name("z", |n| taken.iter().any(|s| s.contains(n)));
    Term::lam(&z, Term::apps(v(&z), ms.iter().cloned()))
}

/// `m` copies of Ω.
pub fn omega_vector(m: usize) -> Vec<Term> {
    vec![omega_big(); m]
}

/// Library combinator by its `$` name.
pub fn combinator(name: &str) -> Option<Term> {
    Some(match name {
        "I" => i(),
        "K" => k(),
        "K*" => k_star(),
        "omega" => omega_small(),
        "Omega" => omega_big(),
        "Theta" => theta(),
        _ => return None,
    })
}

impl Term {
    /// Syntactically Ω, up to α.
    pub fn is_omega(&self) -> bool {
        *self == omega_big()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    #[test]
    fn shapes() {
        assert_eq!(church(0), parse("\\f.\\x.x").unwrap());
        assert_eq!(church(2), parse("\\f.\\x.f (f x)").unwrap());
        assert_eq!(omega_big(), parse("(\\x.x x)(\\x.x x)").unwrap());
        assert_eq!(tuple(&[i(), k_star()]), parse("\\z.z $I $K*").unwrap());
        assert_eq!(omega_vector(2), vec![omega_big(), omega_big()]);
        assert_eq!(theta().to_string(), "(\\a b.b (a a b)) (\\a b.b (a a b))");
    }

    #[test]
    fn numerals_are_closed_normal_forms() {
        for n in 0..20 {
            let c = church(n);
            assert!(c.is_closed());
            assert_eq!(c.redex_count(), 0);
            assert_eq!(church_value(&c), Some(n));
        }
        assert_eq!(church_value(&i()), None);
        assert_eq!(church_value(&k_star()), Some(0));
    }

    #[test]
    fn tuple_binder_avoids_components() {
        let t = tuple(&[Term::var("z")]);
        assert!(!t.is_closed());
        assert_eq!(t.free_vars().into_iter().collect::<Vec<_>>(), vec!["z"]);
    }
}
