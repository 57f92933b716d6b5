//! `prodring`: reduce nested hypergeometric product expressions, decide
//! zero-equivalence, evaluate them and check independence of the output.

mod report;

use clap::{Parser, Subcommand};
use prodring_core::expr::Parsed;
use prodring_core::pipeline::{check_result, independence_report, Independence};
use prodring_core::{parse, reduce, Error, GoOptions};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "prodring", version, about = "Exact reduction of nested product expressions")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Number of values of n the reduce output is checked on (at least 1).
    #[arg(long, global = true, default_value_t = 30)]
    oracle_check: u64,
    /// Largest exponent accepted in a multiplicative relation.
    #[arg(long, global = true, default_value_t = 64)]
    max_relation_exponent: i64,
    /// Starting precision in bits of the relation search.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite in terms of zeta^n and independent products.
    Reduce { input: String },
    /// Decide whether the expression vanishes from some point on.
    Zerotest { input: String },
    /// Evaluate literally for n in a range.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        input: String,
    },
    /// Search for multiplicative relations among the output products.
    Indep {
        #[arg(long, default_value_t = 40)]
        n_max: i64,
        #[arg(long, default_value_t = 3)]
        exp_bound: i64,
        input: String,
    },
}

/// A failed run: message and exit code.
struct Failure(String, u8);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::InvalidLowerBound { .. } => 2,
            Error::RelationSearchExhausted => 3,
            _ => 1,
        };
        Failure(e.to_string(), code)
    }
}

/// An existing file path, `-` for stdin, or the expression itself.
fn read_input(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure(format!("reading stdin: {e}"), 1))?;
        return Ok(s);
    }
    let p = std::path::Path::new(arg);
    if !arg.contains('(') && p.is_file() {
        return std::fs::read_to_string(p).map_err(|e| Failure(format!("reading {arg}: {e}"), 1));
    }
    Ok(arg.to_string())
}

fn load(arg: &str) -> Result<Parsed, Failure> {
    let text = read_input(arg)?;
    Ok(parse(text.trim())?)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let opts = GoOptions { max_exponent: cli.max_relation_exponent, precision: cli.precision };
    match &cli.command {
        Command::Reduce { input } => {
            let p = load(input)?;
            let r = reduce(&p.ast, &opts)?;
            let count = cli.oracle_check.max(1) as usize;
            if let Some(m) = check_result(&p.raw, &r, count)? {
                return Err(Failure(
                    format!(
                        "oracle mismatch at n = {}: input {} but output {}",
                        m.n,
                        report::num_text(&m.expected),
                        report::num_text(&m.got)
                    ),
                    4,
                ));
            }
            Ok(if cli.json { report::reduce_json(&r) } else { report::reduce_text(&r, count) })
        }
        Command::Zerotest { input } => {
            let p = load(input)?;
            let r = reduce(&p.ast, &opts)?;
            Ok(if cli.json {
                serde_json::json!({ "zero": r.is_zero(), "delta": r.delta }).to_string()
            } else if r.is_zero() {
                format!("ZERO for all n >= {}", r.delta)
            } else {
                format!("NONZERO\n{}", r.to_text())
            })
        }
        Command::Eval { from, to, input } => {
            let p = load(input)?;
            let vals: Vec<Option<String>> = p
                .raw
                .eval_range(*from, *to)
                .into_iter()
                .map(|v| match v {
                    Ok(v) => Ok(Some(report::num_text(&v))),
                    Err(e) if prodring_core::expr::is_pole(&e) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<_, Error>>()?;
            Ok(if cli.json {
                serde_json::to_string(&vals).expect("serializable")
            } else {
                vals.iter().map(|v| v.clone().unwrap_or_else(|| "pole".into())).collect::<Vec<_>>().join("\n")
            })
        }
        Command::Indep { n_max, exp_bound, input } => {
            let p = load(input)?;
            let r = reduce(&p.ast, &opts)?;
            let rep = independence_report(&r, *n_max, *exp_bound);
            Ok(match (&rep, cli.json) {
                (Independence::Consistent { products, samples }, false) => format!(
                    "consistent with independence: {products} products, {samples} samples, |exponents| <= {exp_bound}"
                ),
                (Independence::Relation { exponents, root }, false) => format!(
                    "relation found: exponents {exponents:?}, ratio {}",
                    report::num_text(root)
                ),
                (Independence::Consistent { products, samples }, true) => {
                    serde_json::json!({ "independent": true, "products": products, "samples": samples }).to_string()
                }
                (Independence::Relation { exponents, root }, true) => serde_json::json!({
                    "independent": false, "exponents": exponents, "root": report::num_text(root)
                })
                .to_string(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            use std::io::Write;
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(Failure(msg, code)) => {
            eprintln!("prodring: {msg}");
            ExitCode::from(code)
        }
    }
}
