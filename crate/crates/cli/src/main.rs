use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weakpoisson::bracket::Restriction;
use weakpoisson::cohomology::{cohomology_at, CochainOperator, Truncation};
use weakpoisson::dsl::{fixtures, load_system, Bounds, LoadedSystem};
use weakpoisson::error::Error;
use weakpoisson::gauge::MasterFunction;
use weakpoisson::report::{cohomology_json, emit_report, master_json, CheckOutcome, poly_json, verify, Report, Verdict};

const USAGE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "gsys", version, about = "Exact checks for weak Poisson gauge systems")]
struct Cli {
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct BoundArgs {
    /// Highest resolution degree of the completion.
    #[arg(long)]
    max_res: Option<u32>,
    /// Coefficient degree bound (overrides GSYS_MAX_DEG).
    #[arg(long)]
    deg: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks a document requests (or the ones given with --check).
    Verify {
        /// A `.gsys` file or `fixtures:NAME`.
        source: String,
        /// Check to run instead of the document's list; repeatable.
        #[arg(long = "check")]
        checks: Vec<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Complete the master function and print it.
    Complete {
        /// A `.gsys` file or `fixtures:NAME`.
        source: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Evaluate a bracket of expressions written in the document's names.
    Bracket {
        /// A `.gsys` file or `fixtures:NAME`.
        source: String,
        /// odd, even, schouten or derived-K.
        #[arg(long)]
        op: String,
        /// Generator of a derived bracket: `master`, `lift` or an expression.
        #[arg(long, default_value = "master")]
        generator: String,
        /// Bracket arguments: names or expressions.
        args: Vec<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Print the lifted generator and its self-bracket.
    Lift {
        /// A `.gsys` file or `fixtures:NAME`.
        source: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Truncated cohomology at fixed degree and ghost number.
    Cohomology {
        /// A `.gsys` file or `fixtures:NAME`.
        source: String,
        /// Momentum degree (form degree for `qhat`).
        #[arg(long)]
        k: i64,
        /// Ghost number.
        #[arg(long)]
        l: i64,
        /// Base-degree bound of the window.
        #[arg(long = "deg")]
        base_degree: u32,
        #[arg(long, value_enum, default_value_t = Operator::Q)]
        operator: Operator,
        /// Highest resolution degree of the completion.
        #[arg(long)]
        max_res: Option<u32>,
    },
    /// Verify a built-in fixture, or print its source.
    Fixtures {
        /// heisenberg, contact[-N] or triangular[-N].
        name: String,
        /// Size parameter for `contact-n` and `triangular-n`.
        #[arg(long)]
        n: Option<usize>,
        /// Print the fixture's source instead of verifying it.
        #[arg(long)]
        print: bool,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Operator {
    /// Bracket with the momentum-one part of the master function.
    Q,
    /// Bracket with the lift, on forms.
    Qhat,
    /// The Koszul–Tate differential.
    Delta,
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Run<T> = Result<T, Failure>;

fn fixture_source(name: &str) -> Run<String> {
    fixtures::source(name)
        .ok_or_else(|| Failure::Usage(format!("unknown fixture `{name}` (known: {})", fixtures::NAMES.join(", "))))
}

fn load(source: &str) -> Run<LoadedSystem> {
    let text = match source.strip_prefix("fixtures:") {
        Some(name) => fixture_source(name)?,
        None => std::fs::read_to_string(source).map_err(|e| Failure::Usage(format!("{source}: {e}")))?,
    };
    load_system(&text).map_err(|d| Failure::Usage(format!("{source}:{d}")))
}

fn env_degree() -> Run<Option<u32>> {
    match std::env::var("GSYS_MAX_DEG") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("GSYS_MAX_DEG must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn bounds(loaded: &LoadedSystem, args: BoundArgs) -> Run<Bounds> {
    let mut b = loaded.bounds;
    if let Some(d) = env_degree()? {
        b.deg = d;
    }
    if let Some(d) = args.deg {
        b.deg = d;
    }
    if let Some(r) = args.max_res {
        b.max_res = r;
    }
    Ok(b)
}

fn master(loaded: &LoadedSystem, b: Bounds) -> Run<MasterFunction> {
    let sys = &loaded.system;
    Ok(sys.complete_master(&sys.assemble_s0(), b.max_res, b.deg)?)
}

fn bounds_json(b: Bounds) -> Value {
    json!({"max_res": b.max_res, "deg": b.deg})
}

fn report_of(command: &str, verdict: Verdict, fields: Value) -> Report {
    let mut r = Report::new(command);
    r.outcomes.push(CheckOutcome::new(command, verdict, fields));
    r
}

fn run(cli: Cli) -> Run<(Report, Verdict)> {
    match cli.command {
        Command::Verify { source, checks, bounds: args } => {
            let loaded = load(&source)?;
            let b = bounds(&loaded, args)?;
            let checks = if checks.is_empty() { loaded.checks.clone() } else { checks };
            let mut r = verify(&loaded, &checks, b)?;
            r.extra.insert("bounds".into(), bounds_json(b));
            let v = r.verdict();
            Ok((r, v))
        }
        Command::Fixtures { name, n, print } => {
            let name = match n {
                Some(n) => format!("{}-{n}", name.trim_end_matches("-n")),
                None => name,
            };
            let text = fixture_source(&name)?;
            if print {
                print!("{text}");
                return Ok((Report::new("fixtures"), Verdict::Pass));
            }
            let loaded = load_system(&text).map_err(|d| Failure::Usage(format!("fixtures:{name}:{d}")))?;
            let b = bounds(&loaded, BoundArgs { max_res: None, deg: None })?;
            let mut r = verify(&loaded, &loaded.checks, b)?;
            r.command = "fixtures".into();
            r.extra.insert("fixture".into(), json!(name));
            r.extra.insert("bounds".into(), bounds_json(b));
            let v = r.verdict();
            Ok((r, v))
        }
        Command::Complete { source, bounds: args } => {
            let loaded = load(&source)?;
            let b = bounds(&loaded, args)?;
            let s = master(&loaded, b)?;
            let check = loaded.system.check_master(&s.value)?;
            let v = if check.passed() { Verdict::Pass } else { Verdict::Fail };
            let mut fields = master_json(&s, &check);
            fields["bounds"] = bounds_json(b);
            Ok((report_of("complete", v, fields), v))
        }
        Command::Lift { source, bounds: args } => {
            let loaded = load(&source)?;
            let b = bounds(&loaded, args)?;
            let s = master(&loaded, b)?;
            let sys = &loaded.system;
            let psi = sys.lift(&s.value)?;
            let pp = sys.brackets().even(&psi, &psi)?;
            let v = if pp.is_zero() { Verdict::Pass } else { Verdict::Fail };
            let fields = json!({
                "master_function": poly_json(&s.value),
                "psi": poly_json(&psi),
                "psi_psi": poly_json(&pp),
                "bounds": bounds_json(b),
            });
            Ok((report_of("lift", v, fields), v))
        }
        Command::Bracket { source, op, generator, args, bounds: bargs } => {
            let loaded = load(&source)?;
            let eval = |t: &str| loaded.eval(t).map_err(|d| Failure::Usage(format!("`{t}`:{d}")));
            let br = loaded.system.brackets();
            let polys = args.iter().map(|a| eval(a)).collect::<Run<Vec<_>>>()?;
            let pair = |name: &str| match polys.as_slice() {
                [a, b] => Ok((a, b)),
                _ => Err(Failure::Usage(format!("--op {name} takes two arguments, got {}", polys.len()))),
            };
            let mut fields = json!({"op": op, "arguments": args});
            let value = match op.as_str() {
                "odd" => pair("odd").and_then(|(a, b)| Ok(br.odd(a, b)?))?,
                "even" => pair("even").and_then(|(a, b)| Ok(br.even(a, b)?))?,
                "schouten" => pair("schouten").and_then(|(a, b)| Ok(br.schouten(a, b)?))?,
                other => {
                    let k: usize = other
                        .strip_prefix("derived-")
                        .and_then(|k| k.parse().ok())
                        .filter(|k| *k >= 1)
                        .ok_or_else(|| Failure::Usage(format!("unknown --op `{other}` (odd, even, schouten, derived-K)")))?;
                    if polys.len() != k {
                        return Err(Failure::Usage(format!("--op {other} takes {k} arguments, got {}", polys.len())));
                    }
                    let (gen, restriction) = match generator.as_str() {
                        "master" | "lift" => {
                            let b = bounds(&loaded, bargs)?;
                            let s = master(&loaded, b)?.value;
                            if generator == "lift" {
                                (loaded.system.lift(&s)?, Restriction::Lagrangian)
                            } else {
                                (s, Restriction::Extended)
                            }
                        }
                        text => (eval(text)?, Restriction::Extended),
                    };
                    fields["generator"] = poly_json(&gen);
                    br.derived(&gen, &polys, restriction)?
                }
            };
            fields["value"] = poly_json(&value);
            Ok((report_of("bracket", Verdict::Pass, fields), Verdict::Pass))
        }
        Command::Cohomology { source, k, l, base_degree, operator, max_res } => {
            let loaded = load(&source)?;
            let sys = &loaded.system;
            let b = bounds(&loaded, BoundArgs { max_res, deg: None })?;
            let (op, trunc) = match operator {
                Operator::Q => (CochainOperator::q(sys, &master(&loaded, b)?.value)?, Truncation::momentum(k, l, base_degree)),
                Operator::Qhat => {
                    let psi = sys.lift(&master(&loaded, b)?.value)?;
                    (CochainOperator::qhat(sys, &psi), Truncation::form(k, l, base_degree))
                }
                Operator::Delta => (CochainOperator::koszul_tate(sys), Truncation::momentum(k, l, base_degree)),
            };
            let r = cohomology_at(&op, &trunc)?;
            let v = if r.bound_too_small { Verdict::Inconclusive } else { Verdict::Pass };
            Ok((report_of("cohomology", v, cohomology_json(&r)), v))
        }
    }
}

fn engine_exit(e: &Error) -> u8 {
    match e {
        Error::NoSolutionAtBound { .. } | Error::UnboundedDegree(_) => Verdict::Inconclusive.exit_code() as u8,
        Error::CartanMismatch(_) | Error::NotClosed(_) => Verdict::Fail.exit_code() as u8,
        _ => USAGE_ERROR,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let timing = cli.timing;
    let printing = matches!(cli.command, Command::Fixtures { print: true, .. });
    let start = Instant::now();
    match run(cli) {
        Ok((mut report, verdict)) => {
            if !printing {
                if timing {
                    report.extra.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
                }
                print!("{}", emit_report(&report.to_json()));
            }
            ExitCode::from(verdict.exit_code() as u8)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("gsys: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("gsys: {e}");
            ExitCode::from(engine_exit(&e))
        }
    }
}
