use std::cmp::Ordering;
use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hwb_core::barendregt::{is_prefix, tree_from_spec, Codec, TreeSpec};
use hwb_core::bohm::{bt_approx, eta_bt_eq, BtEq};
use hwb_core::ordinals::{compare, hessenberg_sum, Ordinal};
use hwb_core::proofs::gen::{random_closed_term, random_ordinal, random_proof, ProofShape};
use hwb_core::proofs::*;
use hwb_core::reduction::Engine;
use hwb_core::term::Term;
use hwb_core::parse;

fn closed_term() -> impl Strategy<Value = Term> {
    any::<u64>().prop_map(|seed| random_closed_term(&mut ChaCha8Rng::seed_from_u64(seed), 14))
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    any::<u64>().prop_map(|seed| random_ordinal(&mut ChaCha8Rng::seed_from_u64(seed), 2))
}

/// Open terms over `x`, `y`, `z`.
fn open_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(Term::var);
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            (prop_oneof![Just("x"), Just("y"), Just("w")], inner).prop_map(|(v, b)| Term::lam(v, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse(t in open_term()) {
        prop_assert_eq!(parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn substitution_free_vars(t in open_term(), r in open_term()) {
        let s = t.substitute("x", &r);
        let mut want = t.free_vars();
        if want.remove("x") {
            want.extend(r.free_vars());
        }
        prop_assert_eq!(s.free_vars(), want);
    }

    #[test]
    fn one_step_reducts_join(f in closed_term(), a in closed_term(), i in any::<usize>(), j in any::<usize>()) {
        let t = Term::app(f, a);
        let mut e = Engine::default();
        let steps = e.weak_steps(&t);
        let (a, b) = (&steps[i % steps.len()].result, &steps[j % steps.len()].result);
        let w = e.join(a, b, 500);
        prop_assert!(w.is_some(), "{} and {} from {}", a, b, t);
        let w = w.unwrap();
        prop_assert!(w.left.replay(false).is_ok() && w.right.replay(false).is_ok());
    }

    #[test]
    fn natural_sum_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(hessenberg_sum(&a, &b), hessenberg_sum(&b, &a));
        prop_assert_eq!(
            hessenberg_sum(&hessenberg_sum(&a, &b), &c),
            hessenberg_sum(&a, &hessenberg_sum(&b, &c))
        );
        prop_assert_eq!(hessenberg_sum(&a, &Ordinal::zero()), a.clone());
        if compare(&b, &c) == Ordering::Less {
            prop_assert_eq!(compare(&hessenberg_sum(&a, &b), &hessenberg_sum(&a, &c)), Ordering::Less);
        }
    }

    #[test]
    fn reversal_is_an_involution(seed in any::<u64>()) {
        let p = random_proof(&mut ChaCha8Rng::seed_from_u64(seed), &ProofShape::default());
        let nf = normalize_endpiece(&p, 100_000).unwrap();
        let r = reverse_proof(&nf);
        let (m, n) = nf.conclusion();
        prop_assert_eq!(r.conclusion(), (n, m));
        prop_assert!(check_proof(&r, 2000).is_valid());
        prop_assert_eq!(reverse_proof(&r), nf);
    }

    #[test]
    fn deeper_approximants_agree(t in closed_term()) {
        let shallow = bt_approx(&t, 1, 200);
        let deep = bt_approx(&t, 3, 200);
        prop_assert_ne!(eta_bt_eq(&shallow, &deep, 1), BtEq::Different);
    }

    #[test]
    fn codec_round_trip(xs in prop::collection::vec(0u64..10, 0..8)) {
        let c = Codec::default();
        let s = c.encode(&xs).unwrap();
        prop_assert_eq!(c.decode(s.code).decoded, xs);
    }

    #[test]
    fn codes_round_trip(code in 0u64..1 << 40) {
        let c = Codec::default();
        prop_assert_eq!(c.encode(&c.decode(code).decoded).unwrap().code, code);
    }

    #[test]
    fn explicit_trees_are_prefix_closed(seqs in prop::collection::vec(prop::collection::vec(0u64..3, 0..4), 1..6)) {
        let mut accepted: BTreeSet<Vec<u64>> = seqs.iter().cloned().collect();
        for s in &seqs {
            for k in 0..s.len() {
                accepted.insert(s[..k].to_vec());
            }
        }
        let longest = seqs.iter().max_by_key(|s| s.len()).unwrap().clone();
        if !longest.is_empty() {
            let mut broken = accepted.clone();
            broken.remove(&longest[..longest.len() - 1]);
            let rejected = tree_from_spec(TreeSpec::ExplicitFinite { branching: 3, accepted: broken });
            prop_assert!(rejected.is_err());
        }
        let tree = tree_from_spec(TreeSpec::ExplicitFinite { branching: 3, accepted }).unwrap();
        for s in &seqs {
            prop_assert!(tree.member(s));
            for k in 0..s.len() {
                prop_assert!(is_prefix(&s[..k], s) && tree.member(&s[..k]));
            }
        }
    }
}
