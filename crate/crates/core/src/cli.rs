//! The `stefbench` command line.
//!
//! Every command renders into a caller-supplied writer and returns the
//! process exit code, so the whole surface is testable in-process through
//! [`run`].
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_NUMERICAL`], [`EXIT_USAGE`].

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{coc_study, error_constant_with, ErrorConstantReport};
use crate::bench::{render_csv, render_json, render_text, run_benchmark, BenchOptions};
use crate::driver::{solve, IterationTrace, SolveConfig};
use crate::expr::{builtin, builtins, ScalarFunction};
use crate::format::{full, short};
use crate::methods::{MethodKind, METHOD_NAMES};
use crate::precision::{PrecisionContext, DEFAULT_BITS, PRECISION_ENV};
use crate::scalar::HpReal;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "stefbench",
    version,
    about = "Derivative-free root finders in arbitrary precision"
)]
pub struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = DEFAULT_BITS)]
    pub precision_bits: u32,
    /// Output format.
    #[arg(long, visible_alias = "output", global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Parameter of the `kou` method.
    #[arg(long, global = true, default_value = "-1", allow_hyphen_values = true)]
    pub theta: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Target {
    /// Built-in function name (f1..f7).
    #[arg(long)]
    pub function: Option<String>,
    /// Expression in `x`, e.g. "cos(x) - x".
    #[arg(long)]
    pub expr: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one method and print the iteration trace.
    Solve {
        /// Method name, see `list`.
        #[arg(long)]
        method: String,
        #[command(flatten)]
        target: Target,
        /// Initial guess; defaults to the built-in function's.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Take exactly this many steps.
        #[arg(long, conflicts_with = "tol")]
        iterations: Option<usize>,
        /// Step budget when iterating to convergence.
        #[arg(long, default_value_t = 100)]
        max_iterations: usize,
        /// Stop once |f(x)| is at or below this value.
        #[arg(long)]
        tol: Option<String>,
    },
    /// Re-run the bundled reference cells and compare.
    Bench {
        /// Only this table (2..8).
        #[arg(long)]
        table: Option<u8>,
        /// Only this method column.
        #[arg(long)]
        method: Option<String>,
        /// Only this function row.
        #[arg(long)]
        function: Option<String>,
        /// Allowed discrepancy in orders of magnitude.
        #[arg(long, default_value_t = 2.0)]
        tolerance_orders: f64,
        /// Fraction of matching cells required for exit code 0.
        #[arg(long, default_value_t = 0.8)]
        pass_rate: f64,
    },
    /// Computational order of convergence along a run.
    Coc {
        /// Method name, see `list`.
        #[arg(long)]
        method: String,
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Root seed for expressions without a built-in root; defaults to x0.
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
        #[arg(long, default_value_t = 6)]
        iterations: usize,
    },
    /// Taylor coefficients at the root and the mkdf error constant.
    Constant {
        #[command(flatten)]
        target: Target,
        /// Start of the empirical run; defaults to the built-in x0, else the seed.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Root seed; defaults to the built-in root, else x0, else 0.
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
    },
    /// Enumerate methods and built-in functions.
    List,
}

/// A usage problem detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

type CmdResult = Result<i32, Usage>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    execute(&cli, out, err)
}

/// Runs an already parsed command line.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let ctx = PrecisionContext::new(cli.precision_bits).map_err(|e| Usage(e.to_string()))?;
    let written = match &cli.command {
        Command::Solve {
            method,
            target,
            x0,
            iterations,
            max_iterations,
            tol,
        } => {
            let method = method_from(method, &cli.theta, &ctx)?;
            let f = function_from(target)?;
            let x0 = start_from(x0.as_deref(), &f, &ctx)?;
            let mut cfg = match iterations {
                Some(n) => SolveConfig::fixed(*n),
                None => SolveConfig::converge(*max_iterations),
            };
            if let Some(tol) = tol {
                cfg = cfg.with_tolerance(decimal("--tol", tol, &ctx)?);
            }
            let trace = solve(&method, &f, &x0, &cfg, &ctx);
            let code = if trace.status.is_success() {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            };
            write_trace(out, cli.format, &f, &trace).map(|_| code)
        }
        Command::Bench {
            table,
            method,
            function,
            tolerance_orders,
            pass_rate,
        } => {
            if let Some(m) = method {
                m.parse::<MethodKind>().map_err(|e| Usage(e.to_string()))?;
            }
            if let Some(name) = function {
                builtin(name).ok_or_else(|| unknown_function(name))?;
            }
            let options = BenchOptions {
                table: *table,
                method: method.clone(),
                function: function.clone(),
                tolerance_orders: *tolerance_orders,
                pass_rate: *pass_rate,
            };
            let report = run_benchmark(&options, &ctx);
            if report.records.is_empty() {
                return Err(Usage("the filters select no reference cells".into()));
            }
            let text = match cli.format {
                Format::Text => render_text(&report),
                Format::Json => render_json(&report) + "\n",
                Format::Csv => render_csv(&report),
            };
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            };
            out.write_all(text.as_bytes()).map(|_| code)
        }
        Command::Coc {
            method,
            target,
            x0,
            seed,
            iterations,
        } => {
            let method = method_from(method, &cli.theta, &ctx)?;
            let f = function_from(target)?;
            let x0 = start_from(x0.as_deref(), &f, &ctx)?;
            let seed = match seed {
                Some(s) => decimal("--seed", s, &ctx)?,
                None => f.reference_root(&ctx).unwrap_or_else(|| x0.clone()),
            };
            match coc_study(&method, &f, &x0, &seed, *iterations, &ctx) {
                Ok(study) => write_coc(out, cli.format, &method, &f, &study),
                Err(e) => numerical_failure(out, cli.format, &e.to_string()),
            }
        }
        Command::Constant { target, x0, seed } => {
            let f = function_from(target)?;
            let x0_given = x0
                .as_deref()
                .map(|s| decimal("--x0", s, &ctx))
                .transpose()?;
            let seed = match seed {
                Some(s) => decimal("--seed", s, &ctx)?,
                None => f
                    .reference_root(&ctx)
                    .or_else(|| x0_given.clone())
                    .unwrap_or_else(|| ctx.zero()),
            };
            let x0 = x0_given
                .or_else(|| f.default_x0(&ctx))
                .unwrap_or_else(|| seed.clone());
            match error_constant_with(&f, &seed, &x0, &ctx) {
                Ok(report) => write_constant(out, cli.format, &f, &report),
                Err(e) => numerical_failure(out, cli.format, &e.to_string()),
            }
        }
        Command::List => write_list(out, cli.format).map(|_| EXIT_OK),
    };
    match written {
        Ok(code) => Ok(code),
        // A closed pipe is not the command's failure.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(EXIT_OK),
        Err(e) => Err(Usage(format!("cannot write output: {e}"))),
    }
}

fn unknown_function(name: &str) -> Usage {
    let known: Vec<String> = builtins().iter().map(|f| f.name().to_string()).collect();
    Usage(format!(
        "unknown function {name:?} (expected one of: {})",
        known.join(", ")
    ))
}

fn method_from(name: &str, theta: &str, ctx: &PrecisionContext) -> Result<MethodKind, Usage> {
    let method: MethodKind = name
        .parse()
        .map_err(|e: crate::methods::UnknownMethod| Usage(e.to_string()))?;
    Ok(match method {
        MethodKind::Kou { .. } => MethodKind::kou(decimal("--theta", theta, ctx)?),
        other => other,
    })
}

fn function_from(target: &Target) -> Result<ScalarFunction, Usage> {
    match (&target.function, &target.expr) {
        (Some(name), _) => builtin(name).ok_or_else(|| unknown_function(name)),
        (None, Some(text)) => ScalarFunction::parse(text).map_err(|e| {
            Usage(format!(
                "cannot parse --expr: {e}\n  {text}\n  {:>width$}",
                "^",
                width = e.position + 1
            ))
        }),
        (None, None) => Err(Usage("one of --function or --expr is required".into())),
    }
}

fn start_from(
    x0: Option<&str>,
    f: &ScalarFunction,
    ctx: &PrecisionContext,
) -> Result<HpReal, Usage> {
    match x0 {
        Some(text) => decimal("--x0", text, ctx),
        None => f
            .default_x0(ctx)
            .ok_or_else(|| Usage("--x0 is required for expressions".into())),
    }
}

fn decimal(flag: &str, text: &str, ctx: &PrecisionContext) -> Result<HpReal, Usage> {
    ctx.parse_decimal(text)
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            Usage(format!(
                "{flag} expects a finite decimal number, got {text:?}"
            ))
        })
}

fn numerical_failure(out: &mut dyn Write, format: Format, message: &str) -> io::Result<i32> {
    match format {
        Format::Json => writeln!(out, "{}", json!({ "error": message }))?,
        _ => writeln!(out, "failed: {message}")?,
    }
    Ok(EXIT_NUMERICAL)
}

fn opt_full(v: &Option<HpReal>) -> Value {
    v.as_ref().map_or(Value::Null, |v| Value::String(full(v)))
}

fn write_trace(
    out: &mut dyn Write,
    format: Format,
    f: &ScalarFunction,
    trace: &IterationTrace,
) -> io::Result<()> {
    match format {
        Format::Text => {
            writeln!(out, "method {} on {} ({})", trace.method, f.name(), f.ast())?;
            writeln!(
                out,
                "{:>3}  {:>40}  {:>13}  {:>13}",
                "n", "x", "|f(x)|", "|e|"
            )?;
            for it in &trace.iterates {
                let e = it
                    .error
                    .as_ref()
                    .map_or_else(|| "-".to_string(), |e| short(&e.clone().abs()));
                writeln!(
                    out,
                    "{:>3}  {:>40}  {:>13}  {:>13}",
                    it.n,
                    it.x.to_string_radix(10, Some(34)),
                    short(&it.fx.clone().abs()),
                    e
                )?;
            }
            writeln!(
                out,
                "status {} after {} steps, {} evaluations of f",
                trace.status,
                trace.steps(),
                trace.f_call_total
            )?;
            if let Some(detail) = &trace.detail {
                writeln!(out, "detail: {detail}")?;
            }
        }
        Format::Json => {
            let iterates: Vec<Value> = trace
                .iterates
                .iter()
                .map(|it| {
                    json!({
                        "n": it.n,
                        "x": full(&it.x),
                        "fx": full(&it.fx),
                        "error": opt_full(&it.error),
                    })
                })
                .collect();
            let doc = json!({
                "method": trace.method,
                "function": f.name(),
                "expression": f.ast().to_string(),
                "status": trace.status,
                "steps": trace.steps(),
                "f_call_total": trace.f_call_total,
                "detail": trace.detail,
                "iterates": iterates,
            });
            writeln!(out, "{doc:#}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "x", "fx", "error", "status"])?;
            for it in &trace.iterates {
                let e = it.error.as_ref().map(full).unwrap_or_default();
                w.write_record([
                    it.n.to_string(),
                    full(&it.x),
                    full(&it.fx),
                    e,
                    trace.status.to_string(),
                ])?;
            }
            out.write_all(&w.into_inner().map_err(|e| e.into_error())?)?;
        }
    }
    Ok(())
}

fn write_coc(
    out: &mut dyn Write,
    format: Format,
    method: &MethodKind,
    f: &ScalarFunction,
    study: &crate::analysis::CocStudy,
) -> io::Result<i32> {
    let code = if study.estimate.is_ok() {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    };
    match format {
        Format::Text => {
            writeln!(
                out,
                "method {method} on {}, root {}",
                f.name(),
                short(&study.root)
            )?;
            writeln!(out, "{:>3}  {:>13}  {:>13}", "n", "|e_n|", "|f(x_n)|")?;
            for it in &study.trace.iterates {
                let e = it
                    .error
                    .as_ref()
                    .map_or_else(|| "-".into(), |e| short(&e.clone().abs()));
                writeln!(
                    out,
                    "{:>3}  {:>13}  {:>13}",
                    it.n,
                    e,
                    short(&it.fx.clone().abs())
                )?;
            }
            match &study.estimate {
                Ok(est) => {
                    for step in &est.per_step {
                        writeln!(out, "rho_{} = {:.6}", step.n, step.rho.to_f64())?;
                    }
                    writeln!(
                        out,
                        "COC estimate {:.6} from {} usable steps (status {})",
                        est.estimate.to_f64(),
                        est.usable_steps,
                        study.trace.status
                    )?;
                }
                Err(e) => writeln!(out, "no estimate: {e} (status {})", study.trace.status)?,
            }
        }
        Format::Json => {
            let (per_step, estimate, error) = match &study.estimate {
                Ok(est) => (
                    est.per_step
                        .iter()
                        .map(|s| json!({ "n": s.n, "rho": full(&s.rho) }))
                        .collect(),
                    Value::String(full(&est.estimate)),
                    Value::Null,
                ),
                Err(e) => (Vec::new(), Value::Null, Value::String(e.to_string())),
            };
            let errors: Vec<Value> = study
                .trace
                .iterates
                .iter()
                .map(|it| opt_full(&it.error))
                .collect();
            let doc = json!({
                "method": method.to_string(),
                "function": f.name(),
                "root": full(&study.root),
                "status": study.trace.status,
                "errors": errors,
                "per_step": per_step,
                "estimate": estimate,
                "error": error,
            });
            writeln!(out, "{doc:#}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "rho"])?;
            if let Ok(est) = &study.estimate {
                for s in &est.per_step {
                    w.write_record([s.n.to_string(), full(&s.rho)])?;
                }
            }
            out.write_all(&w.into_inner().map_err(|e| e.into_error())?)?;
        }
    }
    Ok(code)
}

fn write_constant(
    out: &mut dyn Write,
    format: Format,
    f: &ScalarFunction,
    report: &ErrorConstantReport,
) -> io::Result<i32> {
    let agreement = report.agreement.as_ref();
    match format {
        Format::Text => {
            writeln!(out, "{} ({})", f.name(), f.ast())?;
            writeln!(
                out,
                "root      {}",
                report.root.to_string_radix(10, Some(40))
            )?;
            for (k, c) in report.c.iter().enumerate() {
                writeln!(out, "c{}        {}", k + 1, c.to_string_radix(10, Some(25)))?;
            }
            writeln!(out, "stencil   max relative gap {:.3e}", report.stencil_gap)?;
            writeln!(
                out,
                "formula   {}",
                report.formula_value.to_string_radix(10, Some(25))
            )?;
            if report.empirical_ratios.is_empty() {
                writeln!(out, "ratios    none usable")?;
            } else {
                let ratios: Vec<String> = report.empirical_ratios.iter().map(short).collect();
                writeln!(out, "ratios    {}", ratios.join(" "))?;
            }
            match agreement {
                Some(a) => writeln!(out, "agreement |ratio/formula| = {}", short(a))?,
                None => writeln!(out, "agreement n/a")?,
            }
        }
        Format::Json => {
            let doc = json!({
                "function": f.name(),
                "root": full(&report.root),
                "c": report.c.iter().map(full).collect::<Vec<_>>(),
                "stencil_gap": report.stencil_gap,
                "formula_value": full(&report.formula_value),
                "empirical_ratios": report.empirical_ratios.iter().map(full).collect::<Vec<_>>(),
                "agreement": agreement.map(full),
            });
            writeln!(out, "{doc:#}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["quantity", "value"])?;
            w.write_record(["root".to_string(), full(&report.root)])?;
            for (k, c) in report.c.iter().enumerate() {
                w.write_record([format!("c{}", k + 1), full(c)])?;
            }
            w.write_record(["formula_value".to_string(), full(&report.formula_value)])?;
            for (k, r) in report.empirical_ratios.iter().enumerate() {
                w.write_record([format!("ratio{}", k + 1), full(r)])?;
            }
            if let Some(a) = agreement {
                w.write_record(["agreement".to_string(), full(a)])?;
            }
            out.write_all(&w.into_inner().map_err(|e| e.into_error())?)?;
        }
    }
    Ok(EXIT_OK)
}

fn write_list(out: &mut dyn Write, format: Format) -> io::Result<()> {
    let methods: Vec<(String, u32)> = METHOD_NAMES
        .iter()
        .map(|n| {
            let m: MethodKind = n.parse().expect("listed names parse");
            (n.to_string(), m.claimed_order())
        })
        .collect();
    let functions = builtins();
    match format {
        Format::Text => {
            writeln!(out, "methods:")?;
            for (name, order) in &methods {
                writeln!(out, "  {name:<11} order {order}")?;
            }
            writeln!(out, "functions:")?;
            for f in &functions {
                writeln!(
                    out,
                    "  {:<3} x0 = {:<4} root ~ {:<9} {}",
                    f.name(),
                    f.default_x0_text().unwrap_or("-"),
                    f.reference_root_text().unwrap_or("-"),
                    f.ast()
                )?;
            }
        }
        Format::Json => {
            let doc = json!({
                "methods": methods.iter().map(|(n, o)| json!({ "name": n, "order": o })).collect::<Vec<_>>(),
                "functions": functions.iter().map(|f| json!({
                    "name": f.name(),
                    "expression": f.ast().to_string(),
                    "x0": f.default_x0_text(),
                    "root": f.reference_root_text(),
                })).collect::<Vec<_>>(),
            });
            writeln!(out, "{doc:#}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["kind", "name", "detail"])?;
            for (name, order) in &methods {
                w.write_record(["method", name, &order.to_string()])?;
            }
            for f in &functions {
                w.write_record(["function", f.name(), &f.ast().to_string()])?;
            }
            out.write_all(&w.into_inner().map_err(|e| e.into_error())?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("stefbench").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn affine_solve_converges_in_one_step() {
        let (code, out, _) = run_args(&[
            "solve",
            "--method",
            "steffensen",
            "--expr",
            "x-3",
            "--x0",
            "10",
            "--iterations",
            "1",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("status converged"), "{out}");
    }

    #[test]
    fn usage_errors_exit_with_two() {
        let (code, _, err) = run_args(&["solve", "--method", "newton", "--function", "f1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("unknown method"));
        let (code, _, err) = run_args(&["solve", "--method", "mkdf", "--expr", "2 +", "--x0", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("cannot parse"), "{err}");
        let (code, _, _) = run_args(&["solve", "--method", "mkdf"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_args(&["--precision-bits", "32", "list"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn list_names_every_method() {
        let (code, out, _) = run_args(&["list"]);
        assert_eq!(code, EXIT_OK);
        for name in METHOD_NAMES {
            assert!(out.contains(name));
        }
        assert!(out.contains("f7"));
    }
}
