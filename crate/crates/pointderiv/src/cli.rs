//! Command-line front end.
//!
//! Exit codes: 0 success, 1 parse error, 2 usage or semantic error,
//! 3 an identity check failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pointderiv_core::identities::{CheckReport, Checker, GenParams, Suite};
use pointderiv_core::{
    point_derivative, second_partial, substitute, Assignment, Context, DerivativeSpec, Engine,
    Series,
};

use crate::exprio::{encode_reports, encode_series, parse_program_with_order, Program};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_SEMANTIC: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pointderiv",
    version,
    about = "Point-derivatives of noncommutative formal power series"
)]
pub struct Cli {
    /// Truncation order for `inv1m` and degree bound for random test series.
    #[arg(long, global = true, default_value_t = 6)]
    pub order: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    /// JSON documents in the interchange format.
    Structured,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Program text given inline.
    #[arg(short = 'e', value_name = "EXPR")]
    pub expr: Option<String>,
    /// Program file.
    #[arg(value_name = "FILE")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Differentiate a series with respect to a variable at a point.
    Derive {
        #[command(flatten)]
        input: Input,
        /// Name of the series to differentiate.
        #[arg(long, default_value = "f")]
        series: String,
        #[arg(long = "var")]
        var: String,
        /// Name of the point; the Hausdorff derivative when omitted.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Apply the inner partial, then the outer one.
    Second {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "f")]
        series: String,
        #[arg(long)]
        outer_var: String,
        #[arg(long)]
        outer_beta: Option<String>,
        #[arg(long)]
        inner_var: String,
        #[arg(long)]
        inner_beta: Option<String>,
    },
    /// Substitute series for variables.
    Subst {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "f")]
        series: String,
        /// `VAR=NAME`; repeatable.
        #[arg(long = "assign", value_name = "VAR=NAME")]
        assign: Vec<String>,
    },
    /// Run identity checks on random series.
    Check {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Run the checks against a deliberately broken derivative.
        #[arg(long, value_parser = parse_mutant)]
        mutant: Option<Engine>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Axioms,
    Uniqueness,
    Chain,
    Clairaut,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Axioms => vec![Suite::Axioms],
            SuiteArg::Uniqueness => vec![Suite::Uniqueness],
            SuiteArg::Chain => vec![Suite::Chain],
            SuiteArg::Clairaut => vec![Suite::Clairaut],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

fn parse_mutant(name: &str) -> Result<Engine, String> {
    match Engine::from_name(name) {
        Some(Engine::Reference) | None => {
            let names: Vec<&str> = Engine::ALL[1..].iter().map(|e| e.name()).collect();
            Err(format!("expected one of: {}", names.join(", ")))
        }
        Some(engine) => Ok(engine),
    }
}

/// Runs `suites` in order, timing each.
pub fn run_checks(checker: &Checker, suites: &[Suite], trials: u64) -> pointderiv_core::Result<Vec<CheckReport>> {
    suites
        .iter()
        .map(|&suite| {
            let start = Instant::now();
            let mut report = checker.run(suite, trials)?;
            report.elapsed = start.elapsed();
            Ok(report)
        })
        .collect()
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn semantic(message: impl ToString) -> Self {
        Failure {
            code: EXIT_SEMANTIC,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<(String, i32), Failure>;

/// Parses `args` (including the program name) and executes them, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SEMANTIC } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = writeln!(out, "{text}");
            code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Derive {
            input,
            series,
            var,
            beta,
        } => {
            let program = load(input, cli.order)?;
            let f = lookup_series(&program, series)?;
            let spec = spec(&program, var, beta.as_deref())?;
            let d = point_derivative(f, &spec).map_err(Failure::semantic)?;
            Ok((emit_series(&d, cli.format), EXIT_OK))
        }
        Command::Second {
            input,
            series,
            outer_var,
            outer_beta,
            inner_var,
            inner_beta,
        } => {
            let program = load(input, cli.order)?;
            let f = lookup_series(&program, series)?;
            let outer = spec(&program, outer_var, outer_beta.as_deref())?;
            let inner = spec(&program, inner_var, inner_beta.as_deref())?;
            let d = second_partial(f, &outer, &inner).map_err(Failure::semantic)?;
            Ok((emit_series(&d, cli.format), EXIT_OK))
        }
        Command::Subst {
            input,
            series,
            assign,
        } => {
            let program = load(input, cli.order)?;
            let f = lookup_series(&program, series)?;
            let mut assignment = Assignment::new();
            for item in assign {
                let (var, name) = item
                    .split_once('=')
                    .ok_or_else(|| Failure::semantic(format!("assignment `{item}` is not of the form VAR=NAME")))?;
                let id = program
                    .context()
                    .resolve(var.trim())
                    .map_err(Failure::semantic)?;
                let image = lookup_value(&program, name.trim())?;
                assignment.insert(id, image).map_err(Failure::semantic)?;
            }
            let g = substitute(f, &assignment).map_err(Failure::semantic)?;
            Ok((emit_series(&g, cli.format), EXIT_OK))
        }
        Command::Check { suite, mutant } => {
            let params = GenParams::new(cli.seed, Context::standard()).with_max_degree(cli.order);
            let checker = Checker::new(params).with_engine(mutant.unwrap_or_default());
            let reports =
                run_checks(&checker, &suite.suites(), cli.trials).map_err(Failure::semantic)?;
            let code = if reports.iter().all(CheckReport::passed) {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            let text = match cli.format {
                OutputFormat::Text => reports
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("\n"),
                OutputFormat::Structured => encode_reports(&reports),
            };
            Ok((text, code))
        }
    }
}

fn load(input: &Input, order: u32) -> Result<Program, Failure> {
    let text = match (&input.expr, &input.file) {
        (Some(expr), _) => expr.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::semantic(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => unreachable!("clap requires one input"),
    };
    parse_program_with_order(&text, order).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: e.to_string(),
    })
}

fn lookup_series<'p>(program: &'p Program, name: &str) -> Result<&'p Series, Failure> {
    program
        .get(name)
        .ok_or_else(|| Failure::semantic(format!("no series named `{name}` is defined")))
}

/// A definition, or failing that a declared symbol as a one-letter series.
fn lookup_value(program: &Program, name: &str) -> Result<Series, Failure> {
    if let Some(s) = program.get(name) {
        return Ok(s.clone());
    }
    match program.context().lookup(name) {
        Some(id) => Series::letter(program.context(), id).map_err(Failure::semantic),
        None => Err(Failure::semantic(format!("`{name}` is neither defined nor declared"))),
    }
}

fn spec(program: &Program, var: &str, beta: Option<&str>) -> Result<DerivativeSpec, Failure> {
    let id = program.context().resolve(var).map_err(Failure::semantic)?;
    let beta = match beta {
        Some(name) => lookup_value(program, name)?,
        None => Series::one(program.context()),
    };
    DerivativeSpec::new(id, beta).map_err(Failure::semantic)
}

fn emit_series(f: &Series, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => f.to_string(),
        OutputFormat::Structured => encode_series(f),
    }
}
