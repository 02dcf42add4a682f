//! The `lct` command line: argument parsing, command execution, and rendering.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::charp::{self, CharpError, DEFAULT_BUDGET};
use crate::curves::{curve_lct, CurveError, CurveMethod};
use crate::engine::{compute_lct, monomial_lct, multiplier_monomial_contains};
use crate::ideal::{parse_ideal, ExponentVector, IdealSpec};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::report::{certificate_json, curve_report_json, exit, nu_report_json, rational_json, Report, ReportStatus};

/// Name of the environment variable overriding the oracle term budget.
pub const BUDGET_ENV: &str = "LCT_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "lct", version, about = "Exact log canonical thresholds of binomial ideals")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print only the essential value.
    #[arg(long, global = true, conflicts_with = "json")]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Threshold of an ideal given as a JSON file.
    Ideal {
        /// Ideal document (JSON).
        file: PathBuf,
        /// Include the witness, matrix, rank and kernel dimension.
        #[arg(long)]
        certificate: bool,
        /// Exit 0 even when only an upper bound is certified.
        #[arg(long)]
        allow_upper_bound: bool,
    },
    /// Threshold of the monomial curve (t^n1, t^n2, t^n3).
    Curve {
        n1: u64,
        n2: u64,
        n3: u64,
        /// Closed-form table, the LP, or both (which must agree).
        #[arg(long, value_enum, default_value_t)]
        method: CurveMethod,
        /// Include the full LP certificate.
        #[arg(long)]
        certificate: bool,
        /// Exit 0 even when the LP certifies only an upper bound.
        #[arg(long)]
        allow_upper_bound: bool,
    },
    /// Threshold of a monomial ideal, and multiplier-ideal membership.
    Monomial {
        /// Ideal document (JSON) with monomial generators only.
        file: PathBuf,
        /// Exponent t of the multiplier ideal.
        #[arg(long)]
        t: Option<String>,
        /// Comma-separated exponents c; asks whether x^c lies in J(a^t).
        /// Defaults to 0 when only --t is given.
        #[arg(long, requires = "t")]
        contains: Option<String>,
    },
    /// Compare nu(p^e) from a characteristic-p expansion with the LP value.
    Verify {
        /// Ideal document (JSON).
        file: PathBuf,
        /// Characteristic p.
        #[arg(long)]
        prime: u64,
        /// Frobenius exponent e, so that q = p^e.
        #[arg(long, default_value_t = 1)]
        exp: u32,
    },
}

/// A finished command: what to print and how to exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn invalid(command: &str, inputs: Value, diagnostics: Vec<String>) -> Self {
        Self { report: Report::error(command, inputs, diagnostics), exit_code: exit::INVALID_INPUT }
    }
}

/// Output streams and exit code of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

/// Parses `args` (including the program name) and runs the command.
/// `budget_env` is the raw value of [`BUDGET_ENV`], if set.
pub fn run<I, T>(args: I, budget_env: Option<&str>) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Invocation { stdout: text, stderr: String::new(), exit_code: 0 }
            } else {
                Invocation { stdout: String::new(), stderr: text, exit_code: exit::INVALID_INPUT }
            };
        }
    };
    let outcome = execute(&cli, budget_env);
    let stdout = if cli.json {
        outcome.report.render_json()
    } else if cli.quiet {
        outcome.report.render_quiet()
    } else {
        outcome.report.render_text()
    };
    let stderr = if cli.quiet && !outcome.report.diagnostics.is_empty() && outcome.exit_code != 0 {
        outcome.report.diagnostics.join("\n") + "\n"
    } else {
        String::new()
    };
    Invocation { stdout, stderr, exit_code: outcome.exit_code }
}

pub fn execute(cli: &Cli, budget_env: Option<&str>) -> Outcome {
    match &cli.command {
        Command::Ideal { file, certificate, allow_upper_bound } => cmd_ideal(file, *certificate, *allow_upper_bound),
        Command::Curve { n1, n2, n3, method, certificate, allow_upper_bound } => {
            cmd_curve([*n1, *n2, *n3], *method, *certificate, *allow_upper_bound)
        }
        Command::Monomial { file, t, contains } => cmd_monomial(file, t.as_deref(), contains.as_deref()),
        Command::Verify { file, prime, exp } => match parse_budget(budget_env) {
            Ok(budget) => cmd_verify(file, *prime, *exp, budget),
            Err(msg) => Outcome::invalid("verify", json!({ "file": file }), vec![msg]),
        },
    }
}

/// `LCT_BUDGET` as a positive integer, or the default when unset.
pub fn parse_budget(raw: Option<&str>) -> Result<u64, String> {
    match raw {
        None => Ok(DEFAULT_BUDGET),
        Some(s) => match s.trim().parse::<u64>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(format!("{BUDGET_ENV} must be a positive integer, got {s:?}")),
        },
    }
}

fn load(path: &Path) -> Result<IdealSpec, Vec<String>> {
    let bytes = std::fs::read(path).map_err(|e| vec![format!("cannot read {}: {e}", path.display())])?;
    parse_ideal(&bytes).map_err(|e| e.diagnostics())
}

pub fn cmd_ideal(file: &Path, certificate: bool, allow_upper_bound: bool) -> Outcome {
    let inputs = json!({ "file": file, "certificate": certificate, "allow_upper_bound": allow_upper_bound });
    let spec = match load(file) {
        Ok(s) => s,
        Err(d) => return Outcome::invalid("ideal", inputs, d),
    };
    let cert = compute_lct(&spec);
    let mut report = Report::new("ideal", inputs);
    report.result = certificate_json(&cert, certificate);
    report.diagnostics = cert.notes.clone();
    let value = format_rational(&cert.value);
    let mut exit_code = exit::OK;
    if cert.is_exact() {
        report.headline = format!("lct = {value}");
    } else {
        report.status = ReportStatus::UpperBoundOnly;
        report.headline = format!("lct <= {value}");
        if !allow_upper_bound {
            exit_code = exit::UPPER_BOUND_ONLY;
        }
    }
    report.essential = value;
    Outcome { report, exit_code }
}

pub fn cmd_curve(n: [u64; 3], method: CurveMethod, certificate: bool, allow_upper_bound: bool) -> Outcome {
    let inputs = json!({ "weights": n, "method": method, "certificate": certificate });
    let curve = match curve_lct(n[0], n[1], n[2], method) {
        Ok(c) => c,
        Err(e @ CurveError::MethodDisagreement { .. }) | Err(e @ CurveError::Inconsistent { .. }) => {
            let mut report = Report::error("curve", inputs, vec![e.to_string()]);
            report.result = Value::Null;
            return Outcome { report, exit_code: exit::FAILURE };
        }
        Err(e) => return Outcome::invalid("curve", inputs, vec![e.to_string()]),
    };
    let mut report = Report::new("curve", inputs);
    report.result = curve_report_json(&curve, certificate);
    let value = format_rational(&curve.value);
    report.headline = format!("lct = {value}");
    report.essential = value;
    let mut exit_code = exit::OK;
    if let Some(cert) = &curve.certificate {
        report.diagnostics.extend(cert.notes.iter().cloned());
        if !cert.is_exact() {
            report.status = ReportStatus::UpperBoundOnly;
            if !allow_upper_bound {
                exit_code = exit::UPPER_BOUND_ONLY;
            }
        }
    }
    Outcome { report, exit_code }
}

fn parse_exponents(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|part| part.trim().parse::<u32>().map_err(|_| format!("exponent {part:?} is not a nonnegative integer")))
        .collect()
}

pub fn cmd_monomial(file: &Path, t: Option<&str>, contains: Option<&str>) -> Outcome {
    let inputs = json!({ "file": file, "t": t, "contains": contains });
    let spec = match load(file) {
        Ok(s) => s,
        Err(d) => return Outcome::invalid("monomial", inputs, d),
    };
    if !spec.binomials().is_empty() {
        return Outcome::invalid(
            "monomial",
            inputs,
            vec![format!(
                "{} binomial generator(s) present; this command takes monomials only",
                spec.binomials().len()
            )],
        );
    }
    let gens: Vec<ExponentVector> = spec.monomials().iter().map(|m| m.exponents().clone()).collect();
    let lct = monomial_lct(&gens).expect("validated monomial generators");
    let mut report = Report::new("monomial", inputs.clone());
    let mut result = serde_json::Map::new();
    result.insert("lct".into(), rational_json(&lct));
    report.headline = format!("lct = {}", format_rational(&lct));
    report.essential = format_rational(&lct);
    if let Some(t_text) = t {
        let t: Rational = match parse_rational(t_text) {
            Ok(v) => v,
            Err(e) => return Outcome::invalid("monomial", inputs, vec![e.to_string()]),
        };
        let c = match contains.map(parse_exponents).transpose() {
            Ok(c) => c.unwrap_or_else(|| vec![0; spec.num_vars()]),
            Err(msg) => return Outcome::invalid("monomial", inputs, vec![msg]),
        };
        let member = match multiplier_monomial_contains(&c, &t, &gens) {
            Ok(m) => m,
            Err(e) => return Outcome::invalid("monomial", inputs, vec![e.to_string()]),
        };
        result.insert("t".into(), rational_json(&t));
        result.insert("exponents".into(), json!(c));
        result.insert("member".into(), json!(member));
        report.essential = member.to_string();
    }
    report.result = Value::Object(result);
    Outcome { report, exit_code: exit::OK }
}

pub fn cmd_verify(file: &Path, p: u64, e: u32, budget: u64) -> Outcome {
    let inputs = json!({ "file": file, "prime": p, "exp": e, "budget": budget });
    let spec = match load(file) {
        Ok(s) => s,
        Err(d) => return Outcome::invalid("verify", inputs, d),
    };
    let cert = compute_lct(&spec);
    let modulus = charp::n_modulus(&cert).ok();
    let modulus_ok = modulus.map(|n| p % n == 1 % n);
    let nu = match charp::nu_against(&spec, &cert, p, e, budget) {
        Ok(r) => r,
        Err(err) => {
            let code = match err {
                CharpError::BudgetExceeded { .. } | CharpError::TooLarge(_) => exit::BUDGET,
                _ => exit::INVALID_INPUT,
            };
            return Outcome { report: Report::error("verify", inputs, vec![err.to_string()]), exit_code: code };
        }
    };
    let mut report = Report::new("verify", inputs);
    report.diagnostics = cert.notes.clone();
    let guaranteed = cert.is_exact() && modulus_ok == Some(true);
    match (modulus, modulus_ok) {
        (Some(n), Some(false)) => {
            report.diagnostics.push(format!("p = {p} is not 1 mod {n}; the lower bound is not guaranteed"))
        }
        (None, _) => report.diagnostics.push("certificate is only an upper bound; no lower bound is guaranteed".into()),
        _ => {}
    }
    let upper_holds = nu.ratio <= cert.value;
    let lower_holds = nu.bound_satisfied == Some(true);
    let mut result = nu_report_json(&nu);
    let fields = result.as_object_mut().expect("nu report is an object");
    fields.insert("lct".into(), certificate_json(&cert, false));
    fields.insert("modulus".into(), json!(modulus));
    fields.insert("modulus_ok".into(), json!(modulus_ok));
    fields.insert("bound_guaranteed".into(), json!(guaranteed));
    fields.insert("upper_bound_holds".into(), json!(upper_holds));
    report.result = result;
    report.headline = format!("nu({}) = {}", nu.q, nu.nu);
    report.essential = nu.nu.to_string();
    let mut exit_code = exit::OK;
    if !upper_holds {
        report.status = ReportStatus::Error;
        report.diagnostics.push(format!(
            "nu/q = {} exceeds the LP value {}",
            format_rational(&nu.ratio),
            format_rational(&cert.value)
        ));
        exit_code = exit::FAILURE;
    }
    if guaranteed && !lower_holds {
        report.status = ReportStatus::Error;
        report.diagnostics.push("nu is below the guaranteed lower bound".into());
        exit_code = exit::FAILURE;
    }
    Outcome { report, exit_code }
}
