//! `hwb`: batch front end for reduction, Böhm trees, proofs, ordinals and
//! the tree-to-term construction.
//!
//! Exit codes: 0 success, 1 input error, 2 fuel exhausted, 3 verification
//! failure.

mod construct;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hwb_core::bohm::bt_approx;
use hwb_core::ordinals::{compare, hessenberg_nprod, hessenberg_sum, omega_pow, Ordinal};
use hwb_core::proofs::{
    check_proof_with, is_normal_form, normalize_endpiece, ord_of_proof, parse_proof, print_proof, CheckConfig,
    NormalForm, ProofError, Verdict,
};
use hwb_core::reduction::{beta_reduce, to_whnf, Engine, Outcome, Strategy};
use hwb_core::{parse, Term};

#[derive(Parser, Debug)]
#[command(name = "hwb", version, about = "Weak beta-Omega reduction, Bohm trees, proofs and the tree construction")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Step, reduct or probe budget.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub fuel: usize,
    /// Böhm-tree depth.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Largest sequence number covered by the construction.
    #[arg(long = "domain-bound", global = true, default_value_t = 14)]
    pub domain_bound: u64,
    /// Write the report here instead of standard output; for `construct`, a
    /// directory that also receives the kit terms.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce the term in a file and print the trace.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Weak)]
        strategy: StrategyArg,
    },
    /// Print a Böhm-tree approximant.
    Bt { file: PathBuf },
    /// Check or normalize a proof fragment.
    Proof {
        #[command(subcommand)]
        action: ProofAction,
    },
    /// Ordinal arithmetic on Cantor normal forms, written like `w^(w+1)*2+3`.
    Ord {
        #[command(subcommand)]
        op: OrdOp,
    },
    /// Build the construction for a tree spec and verify it on the domain.
    Construct { spec: PathBuf },
    /// Run the full construction suite on the demo tree.
    VerifyAll,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum StrategyArg {
    /// Leftmost-outermost β.
    Normal,
    /// Head β.
    Head,
    /// Leftmost-outermost weak βΩ.
    Weak,
    /// To a weak βΩ head normal form.
    Whnf,
}

#[derive(Subcommand, Debug)]
enum ProofAction {
    Check {
        file: PathBuf,
        /// Accept `cert=asserted` on Ω-axioms.
        #[arg(long)]
        allow_asserted: bool,
    },
    Normalize { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum OrdOp {
    /// Natural sum.
    Sum { a: String, b: String },
    /// `a ⊕ … ⊕ a`, `n` times.
    Nprod { a: String, n: u64 },
    /// `ω^a`.
    Pow { a: String },
    /// `<`, `=` or `>`.
    Cmp { a: String, b: String },
}

/// Why a command stopped.
pub enum Failure {
    Input(String),
    Fuel(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Fuel(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Fuel(m) | Failure::Verification(m) => m,
        }
    }
}

/// A report and the failure it ends with, if any.
pub struct Report {
    pub report: String,
    pub failure: Option<Failure>,
}

fn ok(report: String) -> Report {
    Report { report, failure: None }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_term(path: &Path) -> Result<Term, Failure> {
    let text = read(path)?;
    let text: String = text.lines().map(|l| l.split('%').next().unwrap_or("")).collect::<Vec<_>>().join(" ");
    parse(text.trim()).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e.message)))
}

fn ordinal(s: &str) -> Result<Ordinal, Failure> {
    s.parse().map_err(|e: hwb_core::ordinals::OrdinalError| Failure::Input(format!("{s:?}: {e}")))
}

fn proof_failure(e: ProofError) -> Failure {
    match e {
        ProofError::FuelExhausted => Failure::Fuel(e.to_string()),
        ProofError::Syntax { .. } => Failure::Input(e.to_string()),
        _ => Failure::Verification(e.to_string()),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Reduce { file, strategy } => {
            let t = read_term(file)?;
            let (trace, done) = match strategy {
                StrategyArg::Normal | StrategyArg::Head => {
                    let s = if matches!(strategy, StrategyArg::Head) { Strategy::HeadOnly } else { Strategy::LeftmostOutermost };
                    let r = beta_reduce(&t, s, g.fuel);
                    (r.trace, r.outcome != Outcome::FuelExhausted)
                }
                StrategyArg::Weak => {
                    if !t.is_closed() {
                        return Err(Failure::Input("weak reduction needs a closed term".into()));
                    }
                    Engine::default().normal_trace(&t, g.fuel)
                }
                StrategyArg::Whnf => {
                    if !t.is_closed() {
                        return Err(Failure::Input("whnf reduction needs a closed term".into()));
                    }
                    match to_whnf(&t, g.fuel) {
                        Some(tr) => (tr, true),
                        None => (hwb_core::reduction::ReductionTrace::empty(t.clone()), false),
                    }
                }
            };
            let report = format!("{trace}result {}\nsteps {}\n", trace.end, trace.len());
            let failure = (!done).then(|| Failure::Fuel(format!("no normal form within {} steps", g.fuel)));
            Ok(Report { report, failure })
        }
        Command::Bt { file } => {
            let t = read_term(file)?;
            Ok(ok(format!("{}\n", bt_approx(&t, g.depth, g.fuel))))
        }
        Command::Proof { action } => {
            let (file, allow) = match action {
                ProofAction::Check { file, allow_asserted } => (file, *allow_asserted),
                ProofAction::Normalize { file } => (file, false),
            };
            let p = parse_proof(&read(file)?).map_err(proof_failure)?;
            let verdict = check_proof_with(&p, &CheckConfig { fuel: g.fuel, allow_asserted: allow });
            if let Verdict::Invalid { at, reason } = &verdict {
                return Ok(Report {
                    report: format!("invalid at {at}: {reason}\n"),
                    failure: Some(Failure::Verification("proof is invalid".into())),
                });
            }
            let ord = |p| match ord_of_proof(p) {
                Ok(o) => o.compact(),
                Err(_) => "none".to_string(),
            };
            match action {
                ProofAction::Check { .. } => Ok(ok(format!("valid\nord {}\n", ord(&p)))),
                ProofAction::Normalize { .. } => {
                    let n = normalize_endpiece(&p, g.fuel).map_err(proof_failure)?;
                    debug_assert!(is_normal_form(&n));
                    let t = NormalForm::from_proof(&n).map_or(0, |nf| nf.t());
                    Ok(ok(format!("{}% rows {t}\n% ord {}\n", print_proof(&n), ord(&n))))
                }
            }
        }
        Command::Ord { op } => {
            let line = match op {
                OrdOp::Sum { a, b } => hessenberg_sum(&ordinal(a)?, &ordinal(b)?).compact(),
                OrdOp::Nprod { a, n } => hessenberg_nprod(&ordinal(a)?, *n).compact(),
                OrdOp::Pow { a } => omega_pow(ordinal(a)?).compact(),
                OrdOp::Cmp { a, b } => match compare(&ordinal(a)?, &ordinal(b)?) {
                    std::cmp::Ordering::Less => "<".into(),
                    std::cmp::Ordering::Equal => "=".into(),
                    std::cmp::Ordering::Greater => ">".into(),
                },
            };
            Ok(ok(format!("{line}\n")))
        }
        Command::Construct { spec } => construct::construct(&read(spec)?, g, false),
        Command::VerifyAll => construct::construct(construct::DEMO_SPEC, g, true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => Report { report: String::new(), failure: Some(f) },
    };
    let target = match (&cli.command, &cli.global.out) {
        (Command::Construct { .. } | Command::VerifyAll, Some(dir)) => Some(dir.join("report.txt")),
        (_, out) => out.clone(),
    };
    match target {
        Some(path) if !outcome.report.is_empty() => {
            if let Err(e) = fs::write(&path, &outcome.report) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        _ => print!("{}", outcome.report),
    }
    match outcome.failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
