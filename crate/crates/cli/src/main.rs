mod problem;
mod tasks;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use freediv::degrees::TrialPolicy;
use freediv::exec::Exec;
use freediv::poly::MonomialOrder;

use problem::{parse_order, parse_problem, Problem};
use tasks::{check_requirements, Context};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Free divisors, Segre and Chern-Schwartz-MacPherson classes, and curve tests.
#[derive(Parser, Debug)]
#[command(name = "freediv", version)]
struct Args {
    /// Problem file, or `-` for standard input.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Master seed for every randomized computation.
    #[arg(long)]
    seed: Option<u64>,
    /// Bit size of the random primes.
    #[arg(long, value_parser = clap::value_parser!(u32).range(30..=62))]
    prime_bits: Option<u32>,
    /// Agreeing trials required per multidegree (at least 2).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=64))]
    trials: Option<u64>,
    /// Re-verify Monte Carlo values with exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Monomial order for the groebner task: grevlex or lex.
    #[arg(long)]
    order: Option<String>,
    /// Add wall-clock timings to the report.
    #[arg(long)]
    timing: bool,
    /// Run everything on one thread.
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Input(String),
    Refusal(String),
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let mut s = String::new();
    let r = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(s)
}

fn policy(args: &Args, p: &Problem) -> TrialPolicy {
    let mut pol = TrialPolicy::with_seed(args.seed.or(p.options.seed).unwrap_or(0));
    if let Some(b) = args.prime_bits.or(p.options.prime_bits) {
        pol.prime_bits = b;
    }
    if let Some(t) = args.trials.map(|t| t as usize).or(p.options.trials) {
        pol.agree = t;
        pol.escalate_to = pol.escalate_to.max(2 * t + 1);
    }
    pol.exact = args.exact || p.options.exact.unwrap_or(false);
    pol.exec = if args.sequential { Exec::Sequential } else { Exec::default() };
    pol
}

struct Outcome {
    report: Value,
    text: Vec<String>,
    failure: Option<Failure>,
}

fn run(args: &Args) -> Result<Outcome, Failure> {
    let src = read_input(&args.file)?;
    let problem = parse_problem(&src).map_err(|e| Failure::Input(e.to_string()))?;
    check_requirements(&problem).map_err(Failure::Input)?;
    let order = match &args.order {
        Some(o) => parse_order(o).ok_or_else(|| Failure::Input(format!("unknown monomial order '{o}'")))?,
        None => problem.options.order.unwrap_or(MonomialOrder::Grevlex),
    };
    let pol = policy(args, &problem);
    let mut report = json!({
        "schema": 1,
        "input": {
            "vars": problem.vars,
            "seed": pol.seed,
            "prime_bits": pol.prime_bits,
            "trials": pol.agree,
            "escalate_to": pol.escalate_to,
            "exact": pol.exact,
            "order": order.name(),
        },
        "status": "ok",
    });
    let mut text = vec![];
    let mut results = vec![];
    let mut failure = None;

    if let Err(e) = problem.validate() {
        failure = Some(e);
    } else {
        let ctx = Context { problem: &problem, policy: pol, order };
        for task in &problem.tasks {
            let start = Instant::now();
            match ctx.run(task) {
                Ok(r) => {
                    let mut entry = json!({"task": r.task, "result": r.value, "assumptions": r.assumptions});
                    if args.timing {
                        entry["seconds"] = json!(start.elapsed().as_secs_f64());
                    }
                    results.push(entry);
                    text.push(format!("== {}", r.task));
                    text.extend(r.text);
                    text.extend(r.assumptions.iter().map(|a| format!("assumption: {a}")));
                    if args.timing {
                        text.push(format!("time: {:.3}s", start.elapsed().as_secs_f64()));
                    }
                }
                Err(e) => {
                    results.push(json!({"task": task.name(), "error": e.to_string()}));
                    text.push(format!("== {}", task.name()));
                    text.push(format!("refused: {e}"));
                    failure = Some(e);
                    break;
                }
            }
        }
    }
    report["tasks"] = Value::Array(results);
    let failure = failure.map(|e| {
        report["status"] = json!(if e.is_input_error() { "error" } else { "refused" });
        report["error"] = json!(e.to_string());
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Refusal(e.to_string())
        }
    });
    Ok(Outcome { report, text, failure })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = match run(&args) {
        Ok(o) => o,
        Err(Failure::Input(m) | Failure::Refusal(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&outcome.report).expect("serializable report")),
        Format::Text => outcome.text.iter().for_each(|l| println!("{l}")),
    }
    match outcome.failure {
        None => ExitCode::SUCCESS,
        Some(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Some(Failure::Refusal(m)) => {
            eprintln!("refused: {m}");
            ExitCode::from(2)
        }
    }
}
