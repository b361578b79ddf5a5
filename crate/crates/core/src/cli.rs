//! The `qep` command line: `prove`, `shortest`, `check` and `elemental`.
//!
//! Exit codes: 0 provable or confirmed, 1 not provable or not confirmed,
//! 2 input error, 3 internal or resource failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::document::{
    CertificateDoc, CheckDoc, ElementalDoc, HintsDoc, OutputDocument, QueryEcho, Status, Timing,
};
use crate::elemental::generate_elemental;
use crate::error::Error;
use crate::lp::{PivotRule, SolverOptions, DEFAULT_MAX_PIVOTS};
use crate::parser::{render, validate_syntax, Query};
use crate::prover::{prove_in, render_proof, Verdict};
use crate::refute::{check_vector_in, hints_in, HintReport};
use crate::shortest::shortest_proof_in;
use crate::space::{is_party_name, LinearForm, SystemContext, DEFAULT_MAX_PARTIES};
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Environment variable overriding the pivot budget.
pub const MAX_PIVOTS_ENV: &str = "QEP_MAX_PIVOTS";

#[derive(Parser, Debug)]
#[command(
    name = "qep",
    version,
    about = "Prove or refute von-Neumann-type entropy inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PARTIES)]
    max_parties: usize,
    #[arg(long, global = true, value_enum, default_value_t = PivotArg::Bland)]
    pivot: PivotArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PivotArg {
    Bland,
    Lex,
}

#[derive(Args, Debug)]
struct QueryArgs {
    /// Inequality such as "I(A;C|B) >= 0".
    inequality: String,
    /// Equality constraint such as "I(A;C|B) = 0" (repeatable).
    #[arg(short = 'c', long = "constraint")]
    constraints: Vec<String>,
    /// Comma-separated party roster; defaults to the parties mentioned.
    #[arg(long, value_delimiter = ',')]
    parties: Option<Vec<String>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide an inequality and print a proof or a violating direction.
    Prove {
        #[command(flatten)]
        query: QueryArgs,
        /// Also solve the bounded problem and print counterexample hints.
        #[arg(long)]
        hints: bool,
    },
    /// Print an l1-minimal proof.
    Shortest {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Check a candidate entropic vector against the counterexample hints.
    Check {
        #[command(flatten)]
        query: QueryArgs,
        /// k comma-separated rationals in coordinate order, or assignments
        /// like "S(A)=1,S(A,B)=0" (unassigned coordinates are 0).
        #[arg(long, short = 'v', allow_hyphen_values = true)]
        vector: String,
    },
    /// List the elemental inequalities for n parties.
    Elemental {
        #[arg(short = 'n')]
        n: usize,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_INTERNAL
            },
            message: e.to_string(),
        }
    }
}

fn input_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

/// Runs the command line with an explicit pivot-budget override (the value
/// of [`MAX_PIVOTS_ENV`], if set).
pub fn run<I, T>(args: I, max_pivots_env: Option<&str>) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let started = Instant::now();
    let json = cli.global.json;
    let result = solver_options(&cli.global, max_pivots_env).and_then(|opts| match &cli.command {
        Command::Prove { query, hints } => cmd_prove(query, *hints, &cli.global, &opts),
        Command::Shortest { query } => cmd_shortest(query, &cli.global, &opts),
        Command::Check { query, vector } => cmd_check(query, vector, &cli.global, &opts),
        Command::Elemental { n } => cmd_elemental(*n, &cli.global),
    });
    match result {
        Ok((code, mut doc, text)) => {
            doc.timing = Timing {
                elapsed_micros: started.elapsed().as_micros() as u64,
            };
            CliOutput {
                code,
                stdout: if json { doc.to_json() + "\n" } else { text },
                stderr: String::new(),
            }
        }
        Err(f) => CliOutput {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn solver_options(global: &GlobalArgs, env: Option<&str>) -> Result<SolverOptions, Failure> {
    let max_pivots = match env {
        Some(v) => v.trim().parse().map_err(|_| {
            input_failure(format!("{MAX_PIVOTS_ENV} must be a nonnegative integer"))
        })?,
        None => DEFAULT_MAX_PIVOTS,
    };
    Ok(SolverOptions {
        pivot_rule: match global.pivot {
            PivotArg::Bland => PivotRule::Bland,
            PivotArg::Lex => PivotRule::Lexicographic,
        },
        max_pivots,
    })
}

/// Error text with a caret under the offending position.
fn syntax_failure(input: &str, err: Error) -> Failure {
    match &err {
        Error::Syntax { position, .. } => {
            let caret = " ".repeat(*position) + "^";
            input_failure(format!("{err}\n  {input}\n  {caret}"))
        }
        _ => err.into(),
    }
}

fn load_query(args: &QueryArgs, global: &GlobalArgs) -> Result<Query, Failure> {
    validate_syntax(&args.inequality, false).map_err(|e| syntax_failure(&args.inequality, e))?;
    for c in &args.constraints {
        validate_syntax(c, true).map_err(|e| syntax_failure(c, e))?;
    }
    let parties: Option<Vec<String>> = args
        .parties
        .as_ref()
        .map(|p| p.iter().map(|s| s.trim().to_string()).collect());
    Ok(Query::parse_with(
        &args.inequality,
        &args.constraints,
        parties.as_deref(),
        global.max_parties,
    )?)
}

fn base_doc(command: &str, query: &Query) -> OutputDocument {
    let mut doc = OutputDocument::new(command);
    doc.query = Some(QueryEcho::new(query));
    doc
}

fn format_vector(form: &LinearForm) -> String {
    let ctx = form.context();
    ctx.subsets()
        .map(|s| format!("S({})={}", ctx.subset_label(s), form.coeff(s)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_hints(text: &mut String, report: &HintReport) {
    let _ = writeln!(
        text,
        "Counterexample hints (bounded optimum {}):",
        report.optimal_value
    );
    let _ = writeln!(text, "  A violating state's entropies would satisfy:");
    for (i, eq) in report.tight_equalities().iter().enumerate() {
        let _ = writeln!(text, "  {}. {eq}", i + 1);
    }
    for eq in &report.constraint_equalities {
        let _ = writeln!(text, "  constraint: {eq}");
    }
    let _ = writeln!(text, "  bounds: {}", report.bound_conditions);
    let _ = writeln!(text, "  then {}", report.predicted_violation);
}

type CmdResult = Result<(i32, OutputDocument, String), Failure>;

fn cmd_prove(
    args: &QueryArgs,
    want_hints: bool,
    global: &GlobalArgs,
    opts: &SolverOptions,
) -> CmdResult {
    let query = load_query(args, global)?;
    let system = generate_elemental(&query.context)?;
    let mut doc = base_doc("prove", &query);
    let mut text = format!("Query: {}\n", render(&query.b));
    for c in &doc.query.as_ref().expect("query echo").constraints {
        let _ = writeln!(text, "  subject to {c}");
    }
    match prove_in(&system, &query, opts)? {
        Verdict::Provable(cert) => {
            doc.status = Some(Status::Provable);
            text.push_str("Provable (von-Neumann-type). Proof:\n");
            text.push_str(&render_proof(&cert));
            doc.certificate = Some(CertificateDoc::new(&cert));
            Ok((EXIT_OK, doc, text))
        }
        Verdict::NotProvable(ray) => {
            doc.status = Some(Status::NotProvable);
            let _ = writeln!(
                text,
                "Not provable: the inequality is not von-Neumann-type."
            );
            let _ = writeln!(
                text,
                "Violating direction (b's = {}): {}",
                ray.value(),
                format_vector(ray.s_star())
            );
            doc = doc.with_ray(&ray);
            if want_hints {
                let report = hints_in(&system, &query, opts)?;
                write_hints(&mut text, &report);
                doc.hints = Some(HintsDoc::new(&report));
            }
            Ok((EXIT_NEGATIVE, doc, text))
        }
    }
}

fn cmd_shortest(args: &QueryArgs, global: &GlobalArgs, opts: &SolverOptions) -> CmdResult {
    let query = load_query(args, global)?;
    let system = generate_elemental(&query.context)?;
    let mut doc = base_doc("shortest", &query);
    let mut text = format!("Query: {}\n", render(&query.b));
    match shortest_proof_in(&system, &query, opts) {
        Ok(result) => {
            doc.status = Some(Status::Provable);
            let _ = writeln!(
                text,
                "Shortest proof (l1 weight {}, {} elemental terms):",
                result.l1_weight, result.term_count
            );
            text.push_str(&render_proof(&result.certificate));
            doc.certificate = Some(CertificateDoc::shortest(&result));
            Ok((EXIT_OK, doc, text))
        }
        Err(Error::NotProvable) => {
            doc.status = Some(Status::NotProvable);
            let msg = "Not provable: the inequality is not von-Neumann-type, so there is no proof to shorten.";
            doc.message = Some(msg.to_string());
            let _ = writeln!(text, "{msg}");
            Ok((EXIT_NEGATIVE, doc, text))
        }
        Err(e) => Err(e.into()),
    }
}

/// Parses `1,1,0,...` or `S(A)=1,S(A,B)=1/2,...`.
pub fn parse_vector(text: &str, ctx: &SystemContext) -> Result<LinearForm, String> {
    let parse_num = |s: &str| -> Result<Rational, String> {
        let s = s.trim();
        if s.contains('.') {
            let f = crate::parser::parse_inequality_in(
                &format!("{s} S({}) >= 0", ctx.parties()[0]),
                ctx,
            )
            .map_err(|_| format!("not a number: {s:?}"))?;
            return Ok(f.coeffs()[0].clone());
        }
        s.parse::<crate::document::ExactNumber>()
            .map(|x| x.0)
            .map_err(|_| format!("not a number: {s:?}"))
    };
    if text.contains("S(") {
        let mut form = LinearForm::zero(ctx);
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix("S(")
                .ok_or_else(|| format!("expected S(...) at {rest:?}"))?;
            let close = body.find(')').ok_or("unclosed S(")?;
            let names: Vec<&str> = body[..close].split(',').map(str::trim).collect();
            if names.iter().any(|n| !is_party_name(n)) {
                return Err(format!("bad party list {:?}", &body[..close]));
            }
            let subset = ctx.subset(&names).map_err(|e| e.to_string())?;
            let after = body[close + 1..].trim_start();
            let after = after.strip_prefix('=').ok_or("expected '=' after S(...)")?;
            let end = after.find(',').unwrap_or(after.len());
            let value = parse_num(&after[..end])?;
            let slot = subset.mask();
            let current = form.coeff(subset).clone();
            form.add_term(slot, &(value - current));
            rest = after[end..].trim_start_matches(',').trim();
        }
        Ok(form)
    } else {
        let values = text
            .split(',')
            .map(parse_num)
            .collect::<Result<Vec<_>, _>>()?;
        LinearForm::from_coeffs(ctx, values).map_err(|e| e.to_string())
    }
}

fn cmd_check(
    args: &QueryArgs,
    vector: &str,
    global: &GlobalArgs,
    opts: &SolverOptions,
) -> CmdResult {
    let query = load_query(args, global)?;
    let s = parse_vector(vector, &query.context).map_err(input_failure)?;
    let system = generate_elemental(&query.context)?;
    let report = match prove_in(&system, &query, opts)? {
        Verdict::Provable(_) => None,
        Verdict::NotProvable(_) => Some(hints_in(&system, &query, opts)?),
    };
    let result = check_vector_in(&system, &query, &s, report.as_ref())?;
    let mut doc = base_doc("check", &query);
    doc.status = Some(if result.confirmed {
        Status::Confirmed
    } else {
        Status::NotConfirmed
    });
    doc.check = Some(CheckDoc::new(&result, s.coeffs()));
    if let Some(r) = &report {
        doc.hints = Some(HintsDoc::new(r));
    }

    let mark = |ok: bool| if ok { "yes" } else { "no" };
    let mut text = format!(
        "Query: {}\nVector: {}\n",
        render(&query.b),
        format_vector(&s)
    );
    let _ = writeln!(
        text,
        "  in von-Neumann cone (Gs >= 0): {}",
        mark(result.in_cone)
    );
    match &report {
        Some(r) => {
            let _ = writeln!(
                text,
                "  hint equalities hold ({}): {}",
                r.tight.len(),
                mark(result.tight_equalities_hold)
            );
        }
        None => text.push_str("  hint equalities: none (inequality is provable)\n"),
    }
    let _ = writeln!(
        text,
        "  constraints hold (Qs = 0): {}",
        mark(result.constraints_hold)
    );
    let _ = writeln!(
        text,
        "  bounds hold (0 < Ws <= 1): {}",
        mark(result.bounds_hold)
    );
    let _ = writeln!(text, "  b's = {}", result.value);
    if result.confirmed {
        text.push_str("Counterexample direction confirmed.\n");
        Ok((EXIT_OK, doc, text))
    } else {
        text.push_str("Not confirmed as a counterexample direction.\n");
        Ok((EXIT_NEGATIVE, doc, text))
    }
}

fn cmd_elemental(n: usize, global: &GlobalArgs) -> CmdResult {
    let max = global.max_parties.min(26);
    if n < 2 || n > max {
        return Err(input_failure(format!(
            "n must be between 2 and {max}, got {n}"
        )));
    }
    let ctx = SystemContext::with_max_parties(
        (0..n).map(|i| ((b'A' + i as u8) as char).to_string()),
        max,
    )?;
    let system = generate_elemental(&ctx)?;
    let mut doc = OutputDocument::new("elemental");
    let mut text = format!(
        "{} elemental inequalities for {} parties:\n",
        system.len(),
        n
    );
    for (i, row) in system.rows().iter().enumerate() {
        let _ = writeln!(text, "{:4}  {}", i, row.describe());
    }
    doc.elemental = Some(ElementalDoc::new(&system));
    Ok((EXIT_OK, doc, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> SystemContext {
        SystemContext::lettered(3).unwrap()
    }

    #[test]
    fn vector_formats() {
        let ctx = abc();
        let a = parse_vector("1,1,0,0,1,1,0", &ctx).unwrap();
        let b = parse_vector("S(A)=1, S(B)=1, S(A,C)=1, S(B,C)=1", &ctx).unwrap();
        assert_eq!(a, b);
        let c = parse_vector("1/2,0.5,0,0,0,0,-1", &ctx).unwrap();
        assert_eq!(c.coeffs()[0], c.coeffs()[1]);
        assert!(parse_vector("1,1,0,0,1,1", &ctx).is_err());
        assert!(parse_vector("S(D)=1", &ctx).is_err());
        assert!(parse_vector("1,x,0,0,1,1,0", &ctx).is_err());
    }

    #[test]
    fn invalid_pivot_env() {
        let out = run(["qep", "elemental", "-n", "2"], Some("lots"));
        assert_eq!(out.code, EXIT_INPUT);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["qep"], None).code, EXIT_INPUT);
        assert_eq!(run(["qep", "frobnicate"], None).code, EXIT_INPUT);
        assert_eq!(run(["qep", "--help"], None).code, EXIT_OK);
    }

    #[test]
    fn syntax_errors_point_at_position() {
        let out = run(["qep", "prove", "S(A) + S(B) >= 1"], None);
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stderr.contains("position 15"), "{}", out.stderr);
        assert!(out.stderr.contains("               ^"), "{}", out.stderr);
    }

    #[test]
    fn pivot_limit_exits_three() {
        let out = run(
            ["qep", "prove", "S(A|B) >= 0", "--parties", "A,B,C"],
            Some("1"),
        );
        assert_eq!(out.code, EXIT_INTERNAL, "{out:?}");
    }
}
