use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mlogic::decision::{decide_formula, DecisionReport, Verdict};
use mlogic::elim::eliminate_traced;
use mlogic::normal::{to_block_form, to_ccnf, to_nnf};
use mlogic::oracle::{equiv_check, equiv_check_counting, random_formula, spectrum_bruteforce, GeneratorParams};
use mlogic::prop::{clause_form_decide, to_clause_form, truth_table_decide, ClauseVerdict, TableVerdict};
use mlogic::{parse, Error, Formula, Limits};

/// Decision procedure for monadic second-order logic with identity.
#[derive(Debug, Parser)]
#[command(name = "mlogic", version)]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Caps {
    /// Letters allowed in a truth table.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_letters: Option<u64>,
    /// Terms allowed in one normal-form distribution.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_terms: Option<u64>,
    /// Atoms allowed in the formula built by one elimination step.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_atoms: Option<u64>,
    /// Largest count bound allowed in a counting atom.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    max_bound: Option<u32>,
    /// Wall-clock budget for oracle searches, in milliseconds.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_ms: Option<u64>,
}

impl Caps {
    fn limits(&self) -> Limits {
        let mut l = Limits::default().with_env_budget();
        if let Some(n) = self.max_letters {
            l.max_letters = n as usize;
        }
        if let Some(n) = self.max_terms {
            l.max_terms = n as usize;
        }
        if let Some(n) = self.max_atoms {
            l.max_atoms = n as usize;
        }
        if let Some(n) = self.max_bound {
            l.max_bound = n;
        }
        if let Some(ms) = self.budget_ms {
            l.budget = Some(std::time::Duration::from_millis(ms));
        }
        l
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full pipeline and print the verdict.
    Decide {
        #[arg(long)]
        json: bool,
        /// Cross-check against the model oracle up to this size (0 = off).
        #[arg(long, default_value_t = 0)]
        oracle_check: u32,
        /// Print every rewriting step.
        #[arg(long)]
        trace: bool,
        /// Report the real elapsed time in JSON output.
        #[arg(long)]
        timing: bool,
        input: PathBuf,
    },
    /// Print the first-order resultant.
    Eliminate {
        #[arg(long)]
        json: bool,
        input: PathBuf,
    },
    /// Print a normal form.
    Normalize {
        #[arg(long, value_enum)]
        form: Form,
        input: PathBuf,
    },
    /// Decide a propositional formula.
    Prop {
        #[arg(long, value_enum, default_value_t = Method::Table)]
        method: Method,
        input: PathBuf,
    },
    /// Print the set of domain sizes at which a pure sentence holds.
    Spectrum { input: PathBuf },
    /// Compare two formulas on all models up to a size.
    Equiv {
        #[arg(long, default_value_t = 4)]
        max_size: u32,
        first: PathBuf,
        second: PathBuf,
    },
    /// Generate random pure sentences, optionally checking each against the oracle.
    Corpus {
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        check: bool,
        /// Largest domain size compared under --check.
        #[arg(long, default_value_t = 5)]
        max_size: u32,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    Nnf,
    Blocks,
    Ccnf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Table,
    Cnf,
}

const OK: u8 = 0;
const USAGE: u8 = 1;
const OUT_OF_SCOPE: u8 = 2;
const RESOURCE: u8 = 3;
const MISMATCH: u8 = 4;

enum Failure {
    Usage(String),
    Engine(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let limits = cli.caps.limits();
    match run(cli.command, &limits) {
        Ok(out) => {
            print!("{out}");
            ExitCode::from(OK)
        }
        Err(f) => {
            eprintln!("{}", describe(&f));
            ExitCode::from(failure_code(&f))
        }
    }
}

fn describe(f: &Failure) -> String {
    match f {
        Failure::Usage(m) => format!("error: {m}"),
        Failure::Mismatch(m) => format!("oracle mismatch: {m}"),
        Failure::Engine(e) => format!("error: {e}"),
    }
}

fn failure_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) => USAGE,
        Failure::Mismatch(_) => MISMATCH,
        Failure::Engine(e) => exit_code(e),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OutOfScope(_) | Error::Contract(_) => OUT_OF_SCOPE,
        Error::ResourceLimit(_) => RESOURCE,
        _ => USAGE,
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn read_formula(path: &PathBuf) -> Result<(String, Formula), Failure> {
    let text = read_input(path)?;
    let f = parse(&text)?;
    Ok((text, f))
}

fn run(command: Command, limits: &Limits) -> Result<String, Failure> {
    match command {
        Command::Decide {
            json,
            oracle_check,
            trace,
            timing,
            input,
        } => {
            let (text, f) = read_formula(&input)?;
            let mut report = decide_formula(&f, limits)?;
            report.input = text.trim().to_string();
            if oracle_check > 0 {
                oracle_agrees(&f, &report, oracle_check, limits)?;
            }
            if json {
                return Ok(format!("{:#}\n", report.to_json(timing)));
            }
            let mut out = String::new();
            if trace {
                for s in &report.trace {
                    out.push_str(&format!("{}: {}\n", s.rule, s.result));
                }
            }
            out.push_str(&format!("{}\n", report.verdict));
            Ok(out)
        }
        Command::Eliminate { json, input } => {
            let (_, f) = read_formula(&input)?;
            let e = eliminate_traced(&f, limits)?;
            if json {
                let v = json!({
                    "input": f.to_string(),
                    "resultant": e.result.to_string(),
                    "eliminated": e.eliminated,
                    "trace": e.trace.iter().map(|s| json!({"rule": s.rule, "result": s.result})).collect::<Vec<_>>(),
                });
                return Ok(format!("{v:#}\n"));
            }
            Ok(format!("{}\n", e.result))
        }
        Command::Normalize { form, input } => {
            let (_, f) = read_formula(&input)?;
            let out = match form {
                Form::Nnf => to_nnf(&f).to_string(),
                Form::Blocks => to_block_form(&f, limits)?.to_string(),
                Form::Ccnf => to_ccnf(&f, limits)?.to_string(),
            };
            Ok(format!("{out}\n"))
        }
        Command::Prop { method, input } => {
            let (_, f) = read_formula(&input)?;
            let out = match method {
                Method::Table => match truth_table_decide(&f, limits)? {
                    TableVerdict::Valid => "Valid".to_string(),
                    TableVerdict::Unsatisfiable => "Unsatisfiable".to_string(),
                    TableVerdict::Contingent(a) => {
                        let row: Vec<String> = a.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        format!("Not valid: false at {}", row.join(", "))
                    }
                },
                Method::Cnf => match clause_form_decide(&to_clause_form(&f, limits)?) {
                    ClauseVerdict::Valid => "Valid".to_string(),
                    ClauseVerdict::NotValid => "Not valid".to_string(),
                },
            };
            Ok(format!("{out}\n"))
        }
        Command::Spectrum { input } => {
            let (_, f) = read_formula(&input)?;
            let report = decide_formula(&f, limits)?;
            match report.spectrum {
                Some(s) => Ok(format!("{s}\n")),
                None => Err(Error::Contract("a spectrum needs a sentence without free predicates".into()).into()),
            }
        }
        Command::Equiv {
            max_size,
            first,
            second,
        } => {
            let (_, f) = read_formula(&first)?;
            let (_, g) = read_formula(&second)?;
            Ok(match equiv_check(&f, &g, max_size, limits)? {
                None => format!("equivalent up to size {max_size}\n"),
                Some(m) => format!("differ on {m}\n"),
            })
        }
        Command::Corpus {
            count,
            seed,
            check,
            max_size,
        } => corpus(count, seed, check, max_size, limits),
    }
}

/// Compares the verdict with brute-force evaluation up to size `n`.
fn oracle_agrees(f: &Formula, report: &DecisionReport, n: u32, limits: &Limits) -> Result<(), Failure> {
    match &report.verdict {
        Verdict::ResultantOnly(r) => {
            if let Some(m) = equiv_check_counting(f, r, n, limits)? {
                return Err(Failure::Mismatch(format!("resultant differs from the input on {m}")));
            }
        }
        v => {
            let s = v.spectrum().expect("pure verdicts carry a spectrum");
            let truth = spectrum_bruteforce(f, n, limits)?;
            for (i, t) in truth.iter().enumerate() {
                let size = i as u64 + 1;
                if s.contains(size) != *t {
                    return Err(Failure::Mismatch(format!(
                        "engine says {} at size {size}, oracle says {t}",
                        s.contains(size)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn corpus(count: u64, seed: u64, check: bool, max_size: u32, limits: &Limits) -> Result<String, Failure> {
    let mut out = String::new();
    let (mut pass, mut fail, mut skipped) = (0u64, 0u64, 0u64);
    for i in 0..count {
        let f = random_formula(&GeneratorParams::pure(seed.wrapping_add(i)));
        if !check {
            out.push_str(&format!("{f}\n"));
            continue;
        }
        let outcome = decide_formula(&f, limits)
            .map_err(Failure::from)
            .and_then(|r| oracle_agrees(&f, &r, max_size, limits));
        match outcome {
            Ok(()) => pass += 1,
            Err(Failure::Mismatch(m)) => {
                fail += 1;
                out.push_str(&format!("FAIL {f}: {m}\n"));
            }
            Err(Failure::Engine(Error::ResourceLimit(m))) => {
                skipped += 1;
                out.push_str(&format!("SKIP {f}: {m}\n"));
            }
            Err(Failure::Engine(e)) => return Err(e.into()),
            Err(Failure::Usage(m)) => return Err(Failure::Usage(m)),
        }
    }
    if check {
        out.push_str(&format!("pass {pass} fail {fail} skipped {skipped}\n"));
        if fail > 0 {
            print!("{out}");
            return Err(Failure::Mismatch(format!("{fail} of {count} sentences disagree")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_wrong_verdict_is_a_mismatch_with_its_own_code() {
        let limits = Limits::default();
        let f = parse("ex x. ex y. x ~= y").unwrap();
        let mut report = decide_formula(&f, &limits).unwrap();
        assert!(oracle_agrees(&f, &report, 4, &limits).is_ok());
        report.verdict = Verdict::Valid;
        let err = oracle_agrees(&f, &report, 4, &limits).unwrap_err();
        assert!(matches!(err, Failure::Mismatch(_)));
        assert_eq!(failure_code(&err), 4);
    }

    #[test]
    fn engine_errors_map_to_the_table() {
        let code = |e: Error| failure_code(&Failure::Engine(e));
        assert_eq!(code(Error::OutOfScope(String::new())), 2);
        assert_eq!(code(Error::Contract(String::new())), 2);
        assert_eq!(code(Error::ResourceLimit(String::new())), 3);
        assert_eq!(code(Error::Arity { name: "P".into() }), 1);
    }
}
