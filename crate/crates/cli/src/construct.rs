//! The `construct` and `verify-all` reports.

use std::fmt::Write as _;
use std::fs;

use hwb_core::barendregt::{
    b_unfold, box_trace, d_trace, extraction_check, head_trace_b, leaf_check, separation_check, tree_from_spec,
    verify_zeta, BarendregtError, ConstructionKit, SeparationVerdict, TreeSpec,
};
use hwb_core::reduction::{Engine, RuleTag};
use hwb_core::term::{church, i, k_star, omega_big};
use hwb_core::Term;

use crate::{Failure, Global, Report};

pub const DEMO_SPEC: &str = "\
% all 0/1 sequences of length at most 2
family explicit
branching 2
seq
seq 0
seq 1
seq 0 0
seq 0 1
seq 1 0
seq 1 1
";

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    fuel: usize,
}

impl Tally {
    fn record(&mut self, r: Result<bool, BarendregtError>) -> &'static str {
        self.checks += 1;
        match r {
            Ok(true) => "ok",
            Ok(false) => {
                self.failed += 1;
                "FAIL"
            }
            Err(BarendregtError::FuelExhausted { .. }) => {
                self.fuel += 1;
                "fuel"
            }
            Err(_) => {
                self.failed += 1;
                "FAIL"
            }
        }
    }
}

fn seq_text(xs: &[u64]) -> String {
    let inner: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("<{}>", inner.join(","))
}

fn spec_error(e: BarendregtError) -> Failure {
    Failure::Input(e.to_string())
}

pub fn construct(text: &str, g: &Global, full: bool) -> Result<Report, Failure> {
    // `%` comments are accepted like in the other input formats.
    let text: String = text.lines().map(|l| l.split('%').next().unwrap_or("")).collect::<Vec<_>>().join("\n");
    let spec = TreeSpec::parse(&text).map_err(spec_error)?;
    let tree = tree_from_spec(spec).map_err(spec_error)?;
    let kit = ConstructionKit::build(tree, g.domain_bound).map_err(spec_error)?;
    if let Some(dir) = &g.out {
        write_kit(&kit, dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    }
    let codec = kit.codec();
    let fuel = g.fuel;
    let mut out = String::new();
    let mut tally = Tally::default();
    let wf = match kit.tree.well_founded {
        Some(b) => b.to_string(),
        None => "unknown".into(),
    };
    let _ = writeln!(out, "tree branching={} well_founded={wf} domain_bound={}", codec.base(), g.domain_bound);

    for index in 0..2u8 {
        let r = b_unfold(&kit, index, fuel).map(|t| t.len() == 3);
        let _ = writeln!(out, "unfold B{index} {}", tally.record(r));
    }

    let _ = writeln!(out, "code seq member box D B0 B1 separation");
    for code in 0..=g.domain_bound {
        let seq = codec.decode(code).decoded;
        let member = kit.tree.member_code(code);
        let want = if member { k_star() } else { omega_big() };
        let bx = tally.record(box_trace(&kit, code, fuel).map(|t| t.end == want));
        let d = tally.record(d_trace(&kit, code, fuel).map(|t| {
            t.end == want && t.steps.iter().all(|s| s.rule == RuleTag::WeakBeta)
        }));
        let heads: Vec<&str> = (0..2u8)
            .map(|index| {
                tally.record(head_trace_b(&kit, index, code, fuel).map(|h| {
                    if member {
                        h.member && h.pivot() == Some(&kit.pivot(index, code)) && h.countdown == [5, 4, 3, 2, 1]
                    } else {
                        !h.member && h.certificate.is_some_and(|w| w.verify())
                    }
                }))
            })
            .collect();
        let sep = if member {
            match (0..=g.depth).find(|&d| separation_check(&kit, code, d, fuel) == SeparationVerdict::Separated(d)) {
                Some(d) => {
                    tally.record(Ok(true));
                    format!("separated({d})")
                }
                None => {
                    tally.record(Ok(false));
                    "inconclusive".into()
                }
            }
        } else {
            let v = separation_check(&kit, code, g.depth, fuel);
            tally.record(Ok(v == SeparationVerdict::Identified));
            format!("{v:?}").to_lowercase()
        };
        let _ = writeln!(
            out,
            "{code} {} {} {bx} {d} {} {} {sep}",
            seq_text(&seq),
            if member { "yes" } else { "no" },
            heads[0],
            heads[1]
        );
    }

    for p in [i(), k_star()] {
        for m in 0..3 {
            for big_m in [i(), k_star()] {
                let r = verify_zeta(&kit, &p, m, &big_m, fuel).map(|_| true);
                let _ = writeln!(out, "zeta P={p} m={m} M={big_m} {}", tally.record(r));
            }
        }
    }

    if full {
        extended(&kit, g, &mut tally, &mut out);
    }

    let _ = writeln!(out, "summary checks={} failed={} fuel_exhausted={}", tally.checks, tally.failed, tally.fuel);
    let failure = if tally.failed > 0 {
        Some(Failure::Verification(format!("{} checks failed", tally.failed)))
    } else if tally.fuel > 0 {
        Some(Failure::Fuel(format!("{} checks ran out of fuel", tally.fuel)))
    } else {
        None
    };
    Ok(Report { report: out, failure })
}

/// Extraction, leaves, and the bounded non-convertibility of `B₀ s`, `B₁ s`.
fn extended(kit: &ConstructionKit, g: &Global, tally: &mut Tally, out: &mut String) {
    let codec = kit.codec();
    for code in 0..=g.domain_bound {
        let member = kit.tree.member_code(code);
        let seq = seq_text(&codec.decode(code).decoded);
        if member {
            for m in 0..2u64.min(codec.base()) {
                for index in 0..2u8 {
                    let r = extraction_check(kit, index, code, m, 3, g.fuel).map(|e| e.join.is_some() && e.bt_equal);
                    let _ = writeln!(out, "extract B{index} {seq} m={m} {}", tally.record(r));
                }
            }
            let leaf = (0..codec.base()).all(|m| codec.concat(code, m).is_ok_and(|c| !kit.tree.member_code(c)));
            if leaf {
                for m in 0..codec.base() {
                    let r = Ok((0..2u8).all(|index| leaf_check(kit, index, code, m, g.fuel)));
                    let _ = writeln!(out, "leaf {seq} m={m} {}", tally.record(r));
                }
            }
            let b = |index: u8| Term::app(kit.b(index).clone(), church(code));
            let apart = Engine::default().join(&b(0), &b(1), g.fuel).is_none();
            let _ = writeln!(out, "apart {seq} fuel={} {}", g.fuel, tally.record(Ok(apart)));
        } else {
            let b = |index: u8| Term::app(kit.b(index).clone(), church(code));
            let met = Engine::default().join(&b(0), &b(1), g.fuel).is_some_and(|w| w.common == omega_big());
            let _ = writeln!(out, "identified {seq} {}", tally.record(Ok(met)));
        }
    }
}

fn write_kit(kit: &ConstructionKit, dir: &std::path::Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let files = [
        ("box.term", &kit.box_term),
        ("d.term", &kit.d),
        ("concat.term", &kit.concat),
        ("z.term", &kit.z),
        ("b0.term", &kit.b0),
        ("b1.term", &kit.b1),
    ];
    for (name, t) in files {
        fs::write(dir.join(name), format!("{t}\n"))?;
    }
    Ok(())
}
