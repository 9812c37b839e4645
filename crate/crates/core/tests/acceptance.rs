//! The acceptance suite: one PASS/FAIL line per criterion.

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hwb_core::barendregt::*;
use hwb_core::ordinals::{compare, hessenberg_nprod, hessenberg_sum, Ordinal};
use hwb_core::proofs::gen::{closed_terms_of_size, random_closed_term, random_ordinal, random_proof, ProofShape};
use hwb_core::proofs::*;
use hwb_core::reduction::{is_whnf, solvability, to_whnf, Engine, RuleTag, SolvabilityVerdict, WhnfStatus};
use hwb_core::term::{church, i, k_star, omega_big, Term};
use hwb_core::parse;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Two random weak βΩ-reductions of a random closed term always meet.
fn confluence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut engine = Engine::default();
    let mut joined = 0;
    for case in 0..1000 {
        let t = random_closed_term(&mut rng, 12);
        let mut ends = Vec::new();
        for _ in 0..2 {
            let len = rng.gen_range(0..=8);
            let mut cur = t.clone();
            let mut moves = Vec::new();
            for _ in 0..len {
                let steps = engine.weak_steps(&cur);
                let Some(s) = steps.choose(&mut rng) else { break };
                moves.push((s.path.clone(), s.rule));
                cur = s.result.clone();
            }
            let trace = engine.trace_from_moves(&t, &moves);
            trace.replay(false).map_err(|e| format!("case {case}: trace does not replay: {e}"))?;
            ends.push(trace.end);
        }
        let w = engine.join(&ends[0], &ends[1], 500).ok_or_else(|| format!("case {case}: {t} did not join"))?;
        ensure(w.left.replay(false).is_ok() && w.right.replay(false).is_ok(), || format!("case {case}: bad witness"))?;
        joined += 1;
    }
    Ok(format!("{joined}/1000 pairs joined within fuel 500"))
}

/// Every closed term of size at most 10 with a verdict reaches a whnf.
fn cofinality() -> Outcome {
    let (mut tested, mut unknown) = (0, 0);
    for size in 1..=10 {
        for t in closed_terms_of_size(size) {
            if solvability(&t, 1000) == SolvabilityVerdict::Unknown {
                unknown += 1;
                continue;
            }
            tested += 1;
            let trace = to_whnf(&t, 1000).ok_or_else(|| format!("{t}: no whnf"))?;
            ensure(trace.replay(false).is_ok(), || format!("{t}: trace does not replay"))?;
            ensure(is_whnf(&trace.end, 1000) == WhnfStatus::Yes, || format!("{t}: ends at {}", trace.end))?;
        }
    }
    Ok(format!("{tested} terms reach a whnf, 0 counterexamples, {unknown} without a verdict"))
}

/// `α` with `ω` read as `n`, for ordinals below `ω^ω^ω` whose coefficients
/// are all below `n`.
fn base_value(a: &Ordinal, n: u32) -> BigUint {
    a.terms().iter().fold(BigUint::from(0u32), |acc, (e, c)| {
        let exp = u32::try_from(base_value(e, n)).expect("small exponent");
        acc + BigUint::from(n).pow(exp) * BigUint::from(*c)
    })
}

fn weight(a: &Ordinal) -> u64 {
    a.terms().iter().map(|(e, c)| weight(e) + c).sum()
}

/// All ordinals of height at most `h` and weight at most `w`, where the
/// weight adds up coefficients through all levels.
fn small_ordinals(w: u64, h: usize, n: u32) -> Vec<Ordinal> {
    if h == 0 {
        return (0..=w).map(Ordinal::nat).collect();
    }
    let mut exps = small_ordinals(w.saturating_sub(1), h - 1, n);
    exps.sort_by_key(|e| std::cmp::Reverse(base_value(e, n)));
    let mut out = Vec::new();
    fn go(exps: &[Ordinal], from: usize, left: u64, acc: &mut Vec<(Ordinal, u64)>, out: &mut Vec<Ordinal>) {
        out.push(Ordinal::from_terms(acc.clone()).expect("decreasing exponents"));
        for j in from..exps.len() {
            let we = weight(&exps[j]);
            for c in 1..=left.saturating_sub(we) {
                acc.push((exps[j].clone(), c));
                go(exps, j + 1, left - we - c, acc, out);
                acc.pop();
            }
        }
    }
    go(&exps, 0, w, &mut Vec::new(), &mut out);
    out
}

fn ordinals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let zero = Ordinal::zero();
    for case in 0..10_000 {
        let (a, b, c) = (random_ordinal(&mut rng, 2), random_ordinal(&mut rng, 2), random_ordinal(&mut rng, 2));
        let ab = hessenberg_sum(&a, &b);
        ensure(ab == hessenberg_sum(&b, &a), || format!("pair {case}: not commutative"))?;
        ensure(hessenberg_sum(&ab, &c) == hessenberg_sum(&a, &hessenberg_sum(&b, &c)), || format!("pair {case}: not associative"))?;
        if a != zero && b != zero {
            ensure(compare(&a, &ab) == Ordering::Less && compare(&b, &ab) == Ordering::Less, || format!("pair {case}: not increasing"))?;
        }
        if compare(&b, &c) == Ordering::Less {
            ensure(compare(&ab, &hessenberg_sum(&a, &c)) == Ordering::Less, || format!("pair {case}: not monotone"))?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shape = ProofShape::default();
    let (mut endpiece_checks, mut sample_checks) = (0, 0);
    for case in 0..1000 {
        let p = random_proof(&mut rng, &shape);
        let nf = normalize_endpiece(&p, 100_000).map_err(|e| format!("skeleton {case}: {e}"))?;
        let whole = ord_of_proof(&nf).map_err(|e| format!("skeleton {case}: {e}"))?;
        for o in nf.endpiece_oracles() {
            let sub = ord_of_proof(o).map_err(|e| format!("skeleton {case}: {e}"))?;
            ensure(compare(&whole, &sub) == Ordering::Greater, || format!("skeleton {case}: normal form does not exceed an endpiece oracle"))?;
            endpiece_checks += 1;
        }
        let mut stack = vec![&p];
        while let Some(node) = stack.pop() {
            match node {
                ProofNode::Oracle { samples, .. } => {
                    let top = ord_of_proof(node).map_err(|e| format!("skeleton {case}: {e}"))?;
                    let subs: Vec<Ordinal> = samples.iter().map(|s| ord_of_proof(s).expect("bounded samples")).collect();
                    for _ in 0..4 {
                        let combo = subs.iter().fold(Ordinal::zero(), |acc, s| {
                            hessenberg_sum(&acc, &hessenberg_nprod(s, rng.gen_range(0..6)))
                        });
                        ensure(compare(&top, &combo) == Ordering::Greater, || format!("skeleton {case}: oracle does not exceed a sample combination"))?;
                        sample_checks += 1;
                    }
                    stack.extend(samples);
                }
                ProofNode::Leibnitz { left, right, .. } => {
                    stack.push(left);
                    stack.push(right);
                }
                _ => {}
            }
        }
    }

    let mut w = 1;
    let pool = loop {
        let n = u32::try_from(w + 1).expect("small weight");
        let pool = small_ordinals(w, 2, n);
        if pool.len() >= 1000 {
            break pool;
        }
        w += 1;
    };
    let n = u32::try_from(w + 1).expect("small weight");
    let mut pool: Vec<(u64, String, Ordinal)> = pool.into_iter().map(|o| (weight(&o), o.compact(), o)).collect();
    pool.sort();
    pool.truncate(1000);
    let values: Vec<BigUint> = pool.iter().map(|(_, _, o)| base_value(o, n)).collect();
    for x in 0..pool.len() {
        for y in 0..pool.len() {
            let got = compare(&pool[x].2, &pool[y].2);
            ensure(got == values[x].cmp(&values[y]), || format!("compare disagrees on {} and {}", pool[x].1, pool[y].1))?;
        }
    }
    Ok(format!(
        "10000 triples; {endpiece_checks} endpiece oracle bounds and {sample_checks} sample combinations over 1000 skeletons; \
         1000 smallest CNFs (weight <= {w}) order-isomorphic to base-{n} values"
    ))
}

fn normalizer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shape = ProofShape::default();
    let contexts: Vec<Term> = ["z", "z $I", "\\u.z u", "$K z", "z (z $I)", "\\u.u z"].iter().map(|s| parse(s).unwrap()).collect();
    let mut rows = 0;
    for case in 0..500 {
        let p = random_proof(&mut rng, &shape);
        ensure(p.depth() <= 6 && p.oracle_count() <= 4, || format!("case {case}: shape out of bounds"))?;
        ensure(check_proof(&p, 2000).is_valid(), || format!("case {case}: generated proof is invalid"))?;
        let nf = normalize_endpiece(&p, 100_000).map_err(|e| format!("case {case}: {e}"))?;
        ensure(is_normal_form(&nf), || format!("case {case}: not normal"))?;
        ensure(nf.conclusion() == p.conclusion(), || format!("case {case}: conclusion changed"))?;
        let v = check_proof(&nf, 2000);
        ensure(v.is_valid(), || format!("case {case}: normal form invalid: {v:?}"))?;
        let e = to_computation(&nf, 5000).map_err(|e| format!("case {case}: {e}"))?;
        ensure(e.verify(), || format!("case {case}: endpiece does not replay"))?;
        let t = NormalForm::from_proof(&nf).expect("normal").t();
        ensure(e.rows.len() == t, || format!("case {case}: row count"))?;
        rows += t;
        let x = &contexts[case % contexts.len()];
        let lifted = lift_context(&nf, x).map_err(|e| format!("case {case}: {e}"))?;
        let (m, n) = nf.conclusion();
        ensure(lifted.conclusion() == (x.substitute("z", &m), x.substitute("z", &n)), || format!("case {case}: lifted conclusion"))?;
        ensure(is_normal_form(&lifted) && check_proof(&lifted, 2000).is_valid(), || format!("case {case}: lifted proof invalid"))?;
        ensure(NormalForm::from_proof(&lifted).expect("normal").t() == t, || format!("case {case}: lifting changed t"))?;
    }
    Ok(format!("500 fragments normalized and lifted, {rows} rows in total, t preserved"))
}

fn construction() -> Outcome {
    let tree = tree_from_spec(TreeSpec::demo()).map_err(|e| e.to_string())?;
    ensure(tree.well_founded == Some(true), || "demo tree must be well-founded".into())?;
    let kit = ConstructionKit::build(tree, 14).map_err(|e| e.to_string())?;
    let fuel = 100_000;
    let members: Vec<u64> = (0..=14).filter(|&c| kit.tree.member_code(c)).collect();
    let others: Vec<u64> = (0..=14).filter(|&c| !kit.tree.member_code(c)).collect();
    ensure(members.len() == 7 && others.len() == 8, || "demo tree has 7 nodes".into())?;

    for &code in members.iter().chain(&others) {
        let d = d_trace(&kit, code, fuel).map_err(|e| e.to_string())?;
        let want = if kit.tree.member_code(code) { k_star() } else { omega_big() };
        ensure(d.end == want, || format!("D on {code} ends at {}", d.end))?;
        ensure(d.steps.iter().all(|s| s.rule == RuleTag::WeakBeta), || format!("D on {code}: open step"))?;
    }
    for index in 0..2 {
        let u = b_unfold(&kit, index, 10).map_err(|e| e.to_string())?;
        ensure(u.len() == 3, || format!("B{index} unfolds in {} steps", u.len()))?;
    }
    for &code in &members {
        for index in 0..2 {
            let h = head_trace_b(&kit, index, code, fuel).map_err(|e| e.to_string())?;
            ensure(h.pivot() == Some(&kit.pivot(index, code)), || format!("B{index} on {code}: no pivot"))?;
            ensure(h.countdown == [5, 4, 3, 2, 1], || format!("B{index} on {code}: countdown {:?}", h.countdown))?;
        }
    }
    let mut zetas = 0;
    for p in [i(), k_star()] {
        for m in 0..3 {
            for big_m in [i(), k_star()] {
                verify_zeta(&kit, &p, m, &big_m, 5000).map_err(|e| format!("zeta {p} {m} {big_m}: {e}"))?;
                zetas += 1;
            }
        }
    }
    for &code in &members {
        for m in 0..2 {
            for index in 0..2 {
                let e = extraction_check(&kit, index, code, m, 3, 5000).map_err(|e| e.to_string())?;
                ensure(e.join.is_some() && e.bt_equal, || format!("extraction B{index} {code} m={m}"))?;
            }
        }
    }
    let mut depths = Vec::new();
    for &code in &members {
        let d = (0..=6).find(|&d| separation_check(&kit, code, d, 2000) == SeparationVerdict::Separated(d));
        let d = d.ok_or_else(|| format!("{code} not separated by depth 6"))?;
        depths.push(d);
        let b = |index: u8| Term::app(kit.b(index).clone(), church(code));
        ensure(Engine::default().join(&b(0), &b(1), fuel).is_none(), || format!("B0 and B1 on {code} joined"))?;
    }
    for &code in &others {
        let b = |index: u8| Term::app(kit.b(index).clone(), church(code));
        for index in 0..2 {
            ensure(solvability(&b(index), 2000).is_unsolvable(), || format!("B{index} on {code} not certified"))?;
        }
        let w = Engine::default().join(&b(0), &b(1), 1000).ok_or_else(|| format!("{code}: no join"))?;
        ensure(w.common == omega_big(), || format!("{code}: joined at {}", w.common))?;
    }
    depths.dedup();
    Ok(format!(
        "D on 15 codes, 3-step unfold, pivot and 5-4-3-2-1 on 7 members, {zetas} zeta joins, 28 extractions, \
         separation depth {depths:?}, no join at fuel {fuel}, 8 non-members identified at Omega"
    ))
}

const GOLDEN: &[(&[u64], u64)] = &[
    (&[], 0), (&[0], 1), (&[1], 2), (&[2], 3), (&[3], 4),
    (&[0, 0], 11), (&[0, 1], 12), (&[0, 2], 13), (&[0, 3], 14), (&[1, 0], 21),
    (&[1, 1], 22), (&[1, 2], 23), (&[1, 3], 24), (&[2, 0], 31), (&[2, 1], 32),
    (&[2, 2], 33), (&[2, 3], 34), (&[3, 0], 41), (&[3, 1], 42), (&[3, 2], 43),
    (&[3, 3], 44), (&[0, 0, 0], 111), (&[0, 0, 1], 112), (&[0, 0, 2], 113), (&[0, 0, 3], 114),
    (&[0, 1, 0], 121), (&[0, 1, 1], 122), (&[0, 1, 2], 123), (&[0, 1, 3], 124), (&[0, 2, 0], 131),
    (&[0, 2, 1], 132), (&[0, 2, 2], 133), (&[0, 2, 3], 134), (&[0, 3, 0], 141), (&[0, 3, 1], 142),
    (&[0, 3, 2], 143), (&[0, 3, 3], 144), (&[1, 0, 0], 211), (&[1, 0, 1], 212), (&[1, 0, 2], 213),
    (&[1, 0, 3], 214), (&[1, 1, 0], 221), (&[1, 1, 1], 222), (&[1, 1, 2], 223), (&[1, 1, 3], 224),
    (&[1, 2, 0], 231), (&[1, 2, 1], 232), (&[1, 2, 2], 233), (&[1, 2, 3], 234), (&[1, 3, 0], 241),
    (&[1, 3, 1], 242), (&[1, 3, 2], 243), (&[1, 3, 3], 244), (&[2, 0, 0], 311), (&[2, 0, 1], 312),
    (&[2, 0, 2], 313), (&[2, 0, 3], 314), (&[2, 1, 0], 321), (&[2, 1, 1], 322), (&[2, 1, 2], 323),
    (&[2, 1, 3], 324), (&[2, 2, 0], 331), (&[2, 2, 1], 332), (&[2, 2, 2], 333), (&[2, 2, 3], 334),
    (&[2, 3, 0], 341), (&[2, 3, 1], 342), (&[2, 3, 2], 343), (&[2, 3, 3], 344), (&[3, 0, 0], 411),
    (&[3, 0, 1], 412), (&[3, 0, 2], 413), (&[3, 0, 3], 414), (&[3, 1, 0], 421), (&[3, 1, 1], 422),
    (&[3, 1, 2], 423), (&[3, 1, 3], 424), (&[3, 2, 0], 431), (&[3, 2, 1], 432), (&[3, 2, 2], 433),
    (&[3, 2, 3], 434), (&[3, 3, 0], 441), (&[3, 3, 1], 442), (&[3, 3, 2], 443), (&[3, 3, 3], 444),
];

fn codec() -> Outcome {
    let c = Codec::default();
    for (xs, code) in GOLDEN {
        let got = c.encode(xs).map_err(|e| e.to_string())?.code;
        ensure(got == *code, || format!("{xs:?} encodes to {got}, frozen {code}"))?;
        ensure(c.decode(*code).decoded == *xs, || format!("{code} decodes wrongly"))?;
    }
    let mut count = 0;
    let mut xs: Vec<u64> = Vec::new();
    for len in 0..=4u32 {
        for n in 0..10u64.pow(len) {
            xs.clear();
            let mut r = n;
            for _ in 0..len {
                xs.push(r % 10);
                r /= 10;
            }
            let s = c.encode(&xs).map_err(|e| e.to_string())?;
            ensure(c.decode(s.code).decoded == xs, || format!("{xs:?} does not round-trip"))?;
            count += 1;
        }
    }
    for code in 0..=20_000 {
        let s = c.decode(code);
        ensure(c.encode(&s.decoded).map(|e| e.code) == Ok(code), || format!("code {code} does not round-trip"))?;
    }
    Ok(format!("{} frozen codes, {count} sequences and 20001 codes round-trip", GOLDEN.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("confluence", confluence),
        ("cofinality", cofinality),
        ("ordinals", ordinals),
        ("normalizer", normalizer),
        ("construction", construction),
        ("codec", codec),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}; {secs:.1}s)", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
