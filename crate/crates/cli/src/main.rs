//! Batch front end: check derivations, extract realizers, run codes,
//! verify realizers over bounded universes, self-realize first-order
//! sentences, and run the collection demo.
//!
//! Exit codes: 0 holds/accepted, 1 fails/rejected, 2 exhausted or
//! inconclusive, 3 usage or I/O errors.

mod artifact;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Deserialize;

use artifact::{load_code, parse_nat, parse_num_set, parse_oracle, Artifact};
use goodman_core::codes::{apply_chain, EvalResult, Oracle};
use goodman_core::extraction::{
    self, close_over, demo_collection, extract_mode, minimal_collection_bound, Mode,
};
use goodman_core::heo::{ForcingUniverse, TsetFilter, Verdict};
use goodman_core::realizability::{check_single_report, formula_type, PlainSession};
use goodman_core::selfreal::{SelfReal, TruthOracle};
use goodman_core::syntax::{
    check_derivation, parse_formula, parse_formula_with, parse_proof, parse_term, Signature, Type,
};
use goodman_core::valuation;
use goodman_core::Nat;

#[derive(Parser)]
#[command(
    name = "goodman",
    version,
    about = "Realizability kernel for finite-type arithmetic with choice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a derivation file.
    Check {
        /// Proof file in the line-oriented step format.
        proof: PathBuf,
    },
    /// Check a derivation and compile it to a realizer index.
    Extract {
        proof: PathBuf,
        /// Which soundness interpretation to compile for.
        #[arg(long, default_value = "forcing")]
        mode: ModeArg,
        /// Output format.
        #[arg(long, default_value = "text")]
        emit: EmitArg,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a code or evaluate a closed term.
    Run {
        /// Decimal index to run.
        #[arg(long, conflicts_with_all = ["code_file", "term"])]
        code: Option<String>,
        /// Artifact, expression tree (JSON) or decimal number file.
        #[arg(long, conflicts_with = "term")]
        code_file: Option<PathBuf>,
        /// Closed term to evaluate instead of a code.
        #[arg(long)]
        term: Option<String>,
        /// Comma-separated arguments applied in order.
        #[arg(long, default_value = "")]
        args: String,
        /// Inline oracle, e.g. {0:5,3:1}.
        #[arg(long, default_value = "{}")]
        oracle: String,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
    },
    /// Check an extracted realizer against a formula over a universe.
    Verify {
        /// Artifact, expression tree, or decimal code file.
        #[arg(long)]
        code_file: PathBuf,
        /// File containing the formula to check against; defaults to the
        /// universal closure recorded in the artifact.
        #[arg(long)]
        formula: Option<PathBuf>,
        #[arg(long, default_value = "forcing")]
        mode: ModeArg,
        /// Universe description file.
        #[arg(long)]
        universe: Option<PathBuf>,
        /// Keys of the universe: 'auto' or a comma-separated list.
        #[arg(long, default_value = "auto")]
        keys: String,
        #[arg(long, default_value_t = 3)]
        valbound: u64,
        #[arg(long, default_value = "0..4")]
        numset: String,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        /// Condition to check under (inline oracle).
        #[arg(long, default_value = "{}")]
        oracle: String,
        /// Extra realizer candidates for the typed mode, decimal,
        /// comma-separated.
        #[arg(long, default_value = "")]
        candidates: String,
    },
    /// Self-realizability round trip for a first-order sentence.
    Selfreal {
        /// File containing the sentence.
        #[arg(long)]
        formula: PathBuf,
        /// Truth-oracle quantifier bound.
        #[arg(long = "Q", default_value_t = 8)]
        q_bound: u64,
        /// Witness bound for existential keys.
        #[arg(long, default_value_t = 4)]
        witness_bound: u64,
        #[arg(long, default_value = "0..4")]
        numset: String,
        #[arg(long, default_value_t = 50_000)]
        fuel: u64,
        /// Starting condition (inline oracle).
        #[arg(long, default_value = "{}")]
        oracle: String,
    },
    /// Conservativity demo: extract a collection bound through choice.
    Demo {
        /// The premise range: x runs below this bound.
        #[arg(long)]
        bound: u64,
        /// First-order matrix in variables x and y, e.g. 'y =N add(x,x)'.
        #[arg(long)]
        phi: String,
        #[arg(long = "Q", default_value_t = 32)]
        q_bound: u64,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Forcing,
    Plain,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Forcing => Mode::Forcing,
            ModeArg::Plain => Mode::Plain,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum EmitArg {
    Text,
    Json,
}

/// Universe description file.
#[derive(Deserialize)]
struct UniverseFile {
    key_set: Vec<u64>,
    val_bound: u64,
    num_set: Vec<u64>,
    fuel: u64,
    /// "all" or "selfreal:<formula-file>" (relative to this file).
    #[serde(default = "default_tset")]
    tset: String,
    /// Truth bound for selfreal condition sets.
    #[serde(default = "default_q")]
    truth_bound: u64,
    #[serde(default = "default_witness")]
    witness_bound: u64,
}

fn default_tset() -> String {
    "all".into()
}
fn default_q() -> u64 {
    8
}
fn default_witness() -> u64 {
    4
}

fn load_universe(path: &Path, sig: &Signature) -> Result<ForcingUniverse> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let file: UniverseFile = serde_json::from_str(&text).context("universe file")?;
    let mut u = ForcingUniverse::new(
        file.key_set.iter().copied(),
        file.val_bound,
        file.num_set.iter().copied(),
        file.fuel,
    );
    if let Some(rest) = file.tset.strip_prefix("selfreal:") {
        let fpath = path.parent().unwrap_or(Path::new(".")).join(rest);
        let phi = load_formula(&fpath, sig)?;
        let truth = TruthOracle::new(file.truth_bound, sig);
        let nums: Vec<Nat> = file.num_set.iter().map(|n| Nat::from(*n)).collect();
        let desc =
            goodman_core::selfreal::TDescription::new(&phi, &truth, &nums, file.witness_bound)
                .map_err(|e| anyhow!("building the condition set: {e}"))?;
        // The description dictates keys and values; bounds widen to fit.
        let derived = desc.universe(file.fuel);
        u.key_set = derived.key_set;
        u.val_bound = u.val_bound.max(derived.val_bound);
        u.tset = derived.tset;
    } else if file.tset != "all" {
        bail!("tset must be 'all' or 'selfreal:<file>'");
    } else {
        u.tset = TsetFilter::All;
    }
    Ok(u)
}

fn load_formula(path: &Path, sig: &Signature) -> Result<goodman_core::syntax::Formula> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    parse_formula(&body, sig).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    let sig = Signature::standard();
    match cli.command {
        Command::Check { proof } => cmd_check(&proof, &sig),
        Command::Extract {
            proof,
            mode,
            emit,
            out,
        } => cmd_extract(&proof, mode.into(), emit, out.as_deref(), &sig),
        Command::Run {
            code,
            code_file,
            term,
            args,
            oracle,
            fuel,
        } => cmd_run(code, code_file, term, &args, &oracle, fuel, &sig),
        Command::Verify {
            code_file,
            formula,
            mode,
            universe,
            keys,
            valbound,
            numset,
            fuel,
            oracle,
            candidates,
        } => cmd_verify(
            &code_file,
            formula.as_deref(),
            mode.into(),
            universe.as_deref(),
            &keys,
            valbound,
            &numset,
            fuel,
            &oracle,
            &candidates,
            &sig,
        ),
        Command::Selfreal {
            formula,
            q_bound,
            witness_bound,
            numset,
            fuel,
            oracle,
        } => cmd_selfreal(
            &formula,
            q_bound,
            witness_bound,
            &numset,
            fuel,
            &oracle,
            &sig,
        ),
        Command::Demo {
            bound,
            phi,
            q_bound,
        } => cmd_demo(bound, &phi, q_bound, &sig),
    }
}

fn cmd_check(proof: &Path, sig: &Signature) -> Result<u8> {
    let text = std::fs::read_to_string(proof).with_context(|| format!("reading {proof:?}"))?;
    let derivation = parse_proof(&text, sig).map_err(|e| anyhow!("{}: {e}", proof.display()))?;
    match check_derivation(&derivation, sig) {
        Ok(vars) => {
            let vars_text = if vars.is_empty() {
                "closed".to_string()
            } else {
                vars.iter()
                    .map(|(n, t)| format!("{n}:{t}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let steps = derivation.node_count();
            let plural = if steps == 1 { "step" } else { "steps" };
            println!(
                "accepted, {steps} {plural}, conclusion {} ({vars_text})",
                derivation.conclusion
            );
            Ok(0)
        }
        Err(e) => {
            println!("rejected: {e}");
            Ok(1)
        }
    }
}

fn cmd_extract(
    proof: &Path,
    mode: Mode,
    emit: EmitArg,
    out: Option<&Path>,
    sig: &Signature,
) -> Result<u8> {
    let text = std::fs::read_to_string(proof).with_context(|| format!("reading {proof:?}"))?;
    let derivation = parse_proof(&text, sig).map_err(|e| anyhow!("{}: {e}", proof.display()))?;
    let result = match extract_mode(&derivation, sig, mode) {
        Ok(r) => r,
        Err(extraction::ExtractError::Check(e)) => {
            println!("rejected: {e}");
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let artifact = Artifact::of(&result, &derivation.conclusion);
    let rendered = match emit {
        EmitArg::Text => artifact.text(),
        EmitArg::Json => serde_json::to_string_pretty(&artifact)? + "\n",
    };
    match out {
        Some(path) => {
            std::fs::write(path, rendered).with_context(|| format!("writing {path:?}"))?
        }
        None => print!("{rendered}"),
    }
    Ok(0)
}

fn cmd_run(
    code: Option<String>,
    code_file: Option<PathBuf>,
    term: Option<String>,
    args: &str,
    oracle: &str,
    fuel: u64,
    sig: &Signature,
) -> Result<u8> {
    let oracle = parse_oracle(oracle)?;
    let result = if let Some(src) = term {
        let t = parse_term(&src, sig).map_err(|e| anyhow!("term: {e}"))?;
        valuation::value(&t, sig, &oracle, fuel)
    } else {
        let code = match (code, code_file) {
            (Some(n), _) => parse_nat(&n)?,
            (None, Some(path)) => load_code(path.to_str().context("path")?)?,
            (None, None) => bail!("one of --code, --code-file or --term is required"),
        };
        let arg_list: Vec<Nat> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|p| parse_nat(p.trim()))
                .collect::<Result<_>>()?
        };
        apply_chain(&code, &arg_list, &oracle, fuel)
    };
    println!("{result}");
    Ok(match result {
        EvalResult::Value(_) => 0,
        EvalResult::OracleMiss(_) | EvalResult::InvalidCode => 1,
        EvalResult::FuelExhausted => 2,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    code_file: &Path,
    formula: Option<&Path>,
    mode: Mode,
    universe: Option<&Path>,
    keys: &str,
    valbound: u64,
    numset: &str,
    fuel: u64,
    oracle: &str,
    candidates: &str,
    sig: &Signature,
) -> Result<u8> {
    let code = load_code(code_file.to_str().context("path")?)?;
    let phi = match formula {
        Some(path) => load_formula(path, sig)?,
        None => {
            // Fall back to the closure recorded in the artifact.
            let text = std::fs::read_to_string(code_file)?;
            let artifact: Artifact = serde_json::from_str(&text)
                .context("--formula is required unless the code file is an artifact")?;
            parse_formula(&artifact.closure, sig).map_err(|e| anyhow!("artifact closure: {e}"))?
        }
    };
    if !phi.is_closed() {
        bail!("the checked formula must be closed");
    }
    let num_set = parse_num_set(numset)?;
    let verdict = match mode {
        Mode::Forcing => {
            let u = match universe {
                Some(path) => load_universe(path, sig)?,
                None => {
                    let key_list: Vec<u64> = if keys == "auto" {
                        vec![0, 1]
                    } else {
                        parse_num_set(keys)?
                    };
                    ForcingUniverse::new(key_list, valbound, num_set.iter().copied(), fuel)
                }
            };
            let p = parse_oracle(oracle)?;
            let report =
                check_single_report(&u, &p, &code, &phi, sig).map_err(|e| anyhow!("{e}"))?;
            println!("relation: {}", report.relation);
            println!("universe: {}", report.universe);
            println!("condition: {p}");
            for note in &report.notes {
                println!("  {note}");
            }
            println!("verdict: {}", report.verdict);
            report.verdict
        }
        Mode::Plain => {
            let nums: Vec<Nat> = num_set.iter().map(|n| Nat::from(*n)).collect();
            let extra: Vec<Nat> = if candidates.trim().is_empty() {
                Vec::new()
            } else {
                candidates
                    .split(',')
                    .map(|p| parse_nat(p.trim()))
                    .collect::<Result<_>>()?
            };
            let session = PlainSession::new(&nums, fuel, sig).with_candidates(extra);
            let verdict = session.check(&code, &phi);
            let ty = formula_type(&phi);
            println!("relation: typed realizability");
            println!("formula type: {ty}");
            println!("verdict: {verdict}");
            verdict
        }
    };
    Ok(verdict.exit_code() as u8)
}

fn cmd_selfreal(
    formula: &Path,
    q_bound: u64,
    witness_bound: u64,
    numset: &str,
    fuel: u64,
    oracle: &str,
    sig: &Signature,
) -> Result<u8> {
    let phi = load_formula(formula, sig)?;
    let nums: Vec<Nat> = parse_num_set(numset)?.into_iter().map(Nat::from).collect();
    let sr = SelfReal::new(&phi, q_bound, &nums, witness_bound, sig).map_err(|e| anyhow!("{e}"))?;
    let u = sr.universe(fuel);
    println!("sentence: {}", sr.desc.formula);
    println!("truth: {}", sr.sentence_truth());
    println!("universe: {}", u.describe());
    let p = parse_oracle(oracle)?;
    match sr.realize_true(&p, fuel) {
        Ok((q, realizer)) => {
            println!("extended condition q: {q}");
            println!("realizer: {realizer}");
            let rt = sr
                .truth_from_realizer(&q, &realizer, &realizer, &u)
                .map_err(|e| anyhow!("{e}"))?;
            println!(
                "round trip: check {} / truth {} / law {}",
                rt.check, rt.truth, rt.law
            );
            Ok(rt.check.exit_code() as u8)
        }
        Err(goodman_core::selfreal::SelfRealError::PremiseFalse(m)) => {
            println!("not realizable: sentence is false ({m})");
            Ok(1)
        }
        Err(goodman_core::selfreal::SelfRealError::OracleInconclusive(m)) => {
            println!("inconclusive: {m}");
            Ok(2)
        }
        Err(e) => Err(anyhow!("{e}")),
    }
}

fn cmd_demo(bound: u64, phi_src: &str, q_bound: u64, sig: &Signature) -> Result<u8> {
    let ctx = [("x".to_string(), Type::Nat), ("y".to_string(), Type::Nat)];
    let phi = parse_formula_with(phi_src, sig, &ctx).map_err(|e| anyhow!("phi: {e}"))?;
    let demo = match demo_collection(bound, &phi, "x", "y", sig, q_bound) {
        Ok(d) => d,
        Err(extraction::DemoError::PremiseFalse(m)) => {
            println!("premise false: {m}");
            return Ok(1);
        }
        Err(extraction::DemoError::Inconclusive(m)) => {
            println!("inconclusive: {m}");
            return Ok(2);
        }
        Err(e) => return Err(anyhow!("{e}")),
    };
    println!("premise: forall x < {bound}. exists y. {phi}");
    println!("choice instance: {}", demo.derivation.conclusion);
    println!("premise realizer: {}", demo.premise_realizer);
    println!("choice function code: {}", demo.choice_code);
    let values: Vec<String> = demo.values.iter().map(Nat::to_string).collect();
    println!("choice values below the bound: [{}]", values.join(", "));
    println!("collection bound b = 1 + max = {}", demo.bound);
    match minimal_collection_bound(bound, &phi, "x", "y", sig, q_bound) {
        Some(min) if Nat::from(min) == demo.bound => {
            println!("brute force confirms: {min} is the least correct bound");
        }
        Some(min) => {
            println!("brute force: least correct bound is {min}");
            if Nat::from(min) > demo.bound {
                bail!("computed bound is not correct");
            }
        }
        None => bail!("brute force found no bound; raise --Q"),
    }
    // The extracted realizer itself verifies over a small universe.
    let u = ForcingUniverse::new([0], 2, 0..5, 100_000);
    let r = extraction::extract(&demo.derivation, sig)?;
    let sentence = close_over(&demo.derivation.conclusion, &r.closure_vars);
    let verdict =
        goodman_core::realizability::check_single(&u, &Oracle::empty(), &r.code, &sentence, sig)
            .map_err(|e| anyhow!("{e}"))?;
    println!("realizer verdict over {}: {verdict}", u.describe());
    Ok(if verdict == Verdict::Holds {
        0
    } else {
        verdict.exit_code() as u8
    })
}
