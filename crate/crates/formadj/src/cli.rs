//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 when a verification fails or the operator
//! does not satisfy a command's mathematical precondition, 2 on usage,
//! input or parse errors.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use formadj_core::canon::{canonical_pair, extract_canonical, factor_divergence, strip_constant_part};
use formadj_core::oracle::{check_adjoint_identity, OracleParams};
use formadj_core::{Class, Error, OperatorNF};
use serde_json::{json, Value};

use crate::elaborate::parse_operator;
use crate::session::SessionDecl;
use crate::{json as js, text};

#[derive(Parser, Debug)]
#[command(name = "formadj", version, about = "Formal adjoints and canonical divergence forms of linear differential operators")]
struct Cli {
    /// Emit JSON with the same content as the text output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Program file; standard input when absent or `-`.
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassArg {
    #[value(name = "self")]
    SelfAdjoint,
    #[value(name = "skew")]
    SkewAdjoint,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the right-ordered normal form.
    Normalize(Input),
    /// Print the formal adjoint.
    Adjoint(Input),
    /// Print the self-adjoint and skew-adjoint parts.
    Split(Input),
    /// Print canonical divergence forms (both parts unless --class is given).
    Canonical {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Subtract the operator's value on the constant function 1.
    Strip(Input),
    /// Factor a self-adjoint operator as f -> d_a (Q^{ab} (d_b f)).
    FactorQ(Input),
    /// Check the adjoint pairing identity exactly on the torus.
    VerifyAdjoint {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 25)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_freq: i64,
        #[arg(long, default_value_t = 16)]
        denom_bound: i64,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
    },
    /// Check canonical-form and serialization round trips.
    VerifyRoundtrip(Input),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }
    fn fail(code: u8, msg: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NotSelfAdjoint
        | Error::NotSkewAdjoint
        | Error::SymmetryViolation { .. }
        | Error::ConstantsNotAnnihilated
        | Error::OrderTooLow => 1,
        _ => 2,
    }
}

/// Runs the CLI on `args` (including the program name), reading programs
/// from `stdin` when no file is named.
pub fn run_command<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome::ok(rendered)
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let input = match &cli.command {
        Command::Normalize(i) | Command::Adjoint(i) | Command::Split(i) | Command::Strip(i) | Command::FactorQ(i) | Command::VerifyRoundtrip(i) => i,
        Command::Canonical { input, .. } | Command::VerifyAdjoint { input, .. } => input,
    };
    let src = match read_input(input, stdin) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(2, e),
    };
    let (decl, op) = match parse_operator(&src) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(2, e),
    };
    match execute(&cli.command, &decl, &op, cli.json) {
        Ok(o) => o,
        Err(e) => Outcome::fail(error_code(&e), e),
    }
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<String, String> {
    let mut s = String::new();
    match &input.file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        _ => stdin.read_to_string(&mut s).map(|_| s).map_err(|e| format!("standard input: {e}")),
    }
}

fn render(json: bool, value: Value, text: String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(&value).expect("json");
        s.push('\n');
        s
    } else {
        text
    }
}

fn execute(cmd: &Command, decl: &SessionDecl, op: &OperatorNF, json: bool) -> Result<Outcome, Error> {
    let single = |o: &OperatorNF| Outcome::ok(render(json, js::operator(o), text::operator_doc(o)));
    Ok(match cmd {
        Command::Normalize(_) => single(op),
        Command::Adjoint(_) => single(&op.adjoint()),
        Command::Split(_) => {
            let (plus, minus) = op.split();
            let t = format!("# self-adjoint part\n{}# skew-adjoint part\n{}", text::operator_doc(&plus), text::operator_doc(&minus));
            Outcome::ok(render(json, json!({ "self": js::operator(&plus), "skew": js::operator(&minus) }), t))
        }
        Command::Canonical { class, .. } => match class {
            None => {
                let (s, a) = canonical_pair(op)?;
                let t = format!("{}{}", text::canonical_doc(&s), text::canonical_doc(&a));
                Outcome::ok(render(json, json!({ "self": js::canonical(&s), "skew": js::canonical(&a) }), t))
            }
            Some(c) => {
                let class = match c {
                    ClassArg::SelfAdjoint => Class::SelfAdjoint,
                    ClassArg::SkewAdjoint => Class::SkewAdjoint,
                };
                let form = extract_canonical(op, class)?;
                Outcome::ok(render(json, js::canonical(&form), text::canonical_doc(&form)))
            }
        },
        Command::Strip(_) => single(&strip_constant_part(op)?),
        Command::FactorQ(_) => {
            let f = factor_divergence(op)?;
            Outcome::ok(render(json, js::divergence(&f), text::divergence_doc(&f)))
        }
        Command::VerifyAdjoint { trials, seed, max_freq, denom_bound, max_terms, .. } => {
            let params = OracleParams { max_freq: *max_freq, denom_bound: (*denom_bound).max(1), max_terms: *max_terms };
            let report = check_adjoint_identity(op, *trials, *seed, &params)?;
            let mut out = Outcome::ok(render(json, js::report(&report), text::report_text(&report)));
            if !report.passed() {
                out.code = 1;
            }
            out
        }
        Command::VerifyRoundtrip(_) => {
            let checks = roundtrip_checks(decl, op)?;
            let passed = checks.iter().all(|(_, ok)| *ok);
            let mut t = String::new();
            for (name, ok) in &checks {
                t.push_str(&format!("check {name}: {}\n", if *ok { "ok" } else { "FAIL" }));
            }
            t.push_str(&format!("summary: {}\n", if passed { "pass" } else { "fail" }));
            let v = json!({
                "checks": checks.iter().map(|(n, ok)| json!({ "name": n, "verdict": if *ok { "ok" } else { "FAIL" } })).collect::<Vec<_>>(),
                "summary": if passed { "pass" } else { "fail" },
            });
            Outcome { code: if passed { 0 } else { 1 }, stdout: render(json, v, t), stderr: String::new() }
        }
    })
}

/// Named boolean checks run by `verify-roundtrip`.
pub fn roundtrip_checks(decl: &SessionDecl, op: &OperatorNF) -> Result<Vec<(&'static str, bool)>, Error> {
    let (plus, minus) = op.split();
    let (s, a) = canonical_pair(op)?;
    let (es, ea) = (s.expand()?, a.expand()?);
    let op_doc = text::operator_doc(op);
    let canon_doc = format!("{}{}", text::canonical_doc(&s), text::canonical_doc(&a));
    let expr_src = format!("{} {}", decl.to_source(), text::expression_form(op));
    Ok(vec![
        ("canonical-expansion", es.add(&ea)? == *op),
        ("self-part", es == plus && es.is_self_adjoint()),
        ("skew-part", ea == minus && ea.is_skew_adjoint()),
        ("operator-text", text::parse_operator_docs(&op_doc, decl).is_ok_and(|d| d == [op.clone()])),
        ("canonical-text", text::parse_canonical_docs(&canon_doc, decl).is_ok_and(|d| d == [s.clone(), a.clone()])),
        ("expression-text", parse_operator(&expr_src).is_ok_and(|(_, o)| o == *op)),
        ("adjoint-involution", op.adjoint().adjoint() == *op),
    ])
}
