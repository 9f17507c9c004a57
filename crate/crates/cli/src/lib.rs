//! Command-line front end: argument parsing, dispatch and output formatting.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use cbinom::closed_form::{catalog_get, cf_format, cf_parse};
use cbinom::logsine::{log_sin_moment, ls4_check, theorem1_residual, QuadratureOptions};
use cbinom::numerics::{PrecisionContext, Real};
use cbinom::series::{evaluate, evaluate_alternating, EvalOptions, SeriesFamily};
use cbinom::verify::{
    all_targets, lemma_check, render_report, verify_targets, DisputedSet, LemmaSuite, Report, ReportFormat, Target,
    VerifyConfig, VerifyError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Disputed list picked up from the working directory when `--disputed` is absent.
const DEFAULT_DISPUTED: &str = "disputed.txt";

#[derive(Debug, Parser)]
#[command(name = "cbinom", version, about = "Verify central binomial series identities to high precision")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Shared {
    /// Significant decimal digits of working precision
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(10..=2000))]
    digits: u32,
    /// Pass threshold on absolute error [default: 10^-(digits-15)]
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Direct-summation cutoff K0 for series evaluation
    #[arg(long, global = true)]
    terms: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one series and compare it with its catalogued closed form
    Eval {
        /// Family tag: S, L, V, Z, W, LIN_H, LIN_h, HSQ_K3, ...
        #[arg(long)]
        family: String,
        /// Order for indexed families
        #[arg(long)]
        n: Option<u32>,
    },
    /// Print a catalogued closed form, or normalize and evaluate an expression
    ClosedForm {
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        family: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        /// Closed-form text such as "z2 - 2*ln2^2"
        #[arg(long)]
        expr: Option<String>,
    },
    /// Run verification targets and print a report
    Verify {
        /// Every catalog entry, chain, relation, theorem order and lemma suite
        #[arg(long, conflicts_with = "target", required_unless_present = "target")]
        all: bool,
        /// Target name such as S:4, EQ22_25, SPLIT_EQ104, THEOREM1:3, LS4, FINITE_BINOM_SUM
        #[arg(long, value_delimiter = ',')]
        target: Vec<String>,
        #[command(flatten)]
        io: ReportIo,
    },
    /// Check one lemma at index k
    Lemma {
        /// Lemma number (1 to 4)
        #[arg(long, required_unless_present = "suite", conflicts_with = "suite")]
        id: Option<u32>,
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Run a whole lemma suite instead
        #[arg(long)]
        suite: Option<String>,
    },
    /// Log-sine moments by tanh-sinh quadrature
    Logsine {
        /// Moment order
        #[arg(long, required_unless_present = "ls4", conflicts_with = "ls4")]
        n: Option<u32>,
        /// Check the fourth-order log-sine-cosine identity instead
        #[arg(long)]
        ls4: bool,
        /// Maximum quadrature refinement level
        #[arg(long)]
        level: Option<u32>,
    },
    /// Re-render a saved JSON report, or run the full verification
    Report {
        /// JSON report written by `verify --format json`
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        io: ReportIo,
    },
}

#[derive(Debug, Args)]
struct ReportIo {
    /// Disputed-entry list [default: ./disputed.txt when present]
    #[arg(long)]
    disputed: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        let code = if e.is_not_converged() { EXIT_NOT_CONVERGED } else { EXIT_USAGE };
        Self { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) }
}

struct Env {
    ctx: PrecisionContext,
    tol: Real,
    eval: EvalOptions,
    format: Format,
}

impl Env {
    fn new(shared: &Shared) -> Result<Self, Failure> {
        let ctx = PrecisionContext::with_digits(shared.digits).map_err(|e| Failure::usage(e.to_string()))?;
        let tol = match &shared.tol {
            Some(text) => {
                let t = Real::parse_decimal(text, ctx).map_err(|e| Failure::usage(format!("--tol: {e}")))?;
                if t.is_sign_negative() {
                    return Err(Failure::usage("--tol must be non-negative"));
                }
                t
            }
            None => VerifyConfig::default_tol(ctx),
        };
        let mut eval = EvalOptions::new(ctx);
        if let Some(terms) = shared.terms {
            eval = eval.with_cutoff(terms);
            eval.validate().map_err(|e| Failure::usage(format!("--terms: {e}")))?;
        }
        Ok(Self { ctx, tol, eval, format: shared.format })
    }

    fn verify_config(&self) -> VerifyConfig {
        VerifyConfig { ctx: self.ctx, tol: self.tol.clone(), eval: self.eval.clone() }
    }

    fn passes(&self, error: &Real) -> bool {
        *error <= self.tol
    }
}

#[derive(Serialize)]
struct EvalOutput {
    family: String,
    digits: u32,
    terms_used: u64,
    numeric_value: Real,
    self_error: String,
    converged: bool,
    closed_form: Option<String>,
    closed_form_value: Option<Real>,
    abs_error: Option<String>,
    tol: String,
    pass: Option<bool>,
}

#[derive(Serialize)]
struct ClosedFormOutput {
    family: Option<String>,
    closed_form: String,
    value: Real,
    source: Option<String>,
    disputed: Option<bool>,
}

#[derive(Serialize)]
struct LemmaOutput {
    lemma: u32,
    k: u64,
    exact_value: String,
    value: Real,
    residual: String,
    tol: String,
    pass: bool,
}

#[derive(Serialize)]
struct LogSineOutput {
    check: String,
    value: Option<Real>,
    levels_used: Option<u32>,
    self_error: Option<String>,
    residual: Option<String>,
    tol: String,
    pass: bool,
}

/// Significant digits for error strings.
const ERROR_DIGITS: usize = 6;

fn error_text(r: &Real) -> String {
    r.to_decimal(ERROR_DIGITS)
}

/// One flat record as aligned `key  value` lines, one-row CSV, or pretty JSON.
fn render_record<T: Serialize>(record: &T, format: Format) -> Result<Vec<u8>, Failure> {
    let internal = |e: &dyn std::fmt::Display| Failure { code: EXIT_USAGE, message: e.to_string() };
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(record).map_err(|e| internal(&e))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(record).map_err(|e| internal(&e))?;
            w.into_inner().map_err(|e| internal(&e))
        }
        Format::Text => {
            let value = serde_json::to_value(record).map_err(|e| internal(&e))?;
            let fields = value.as_object().ok_or_else(|| internal(&"record is not an object"))?;
            let width = fields.keys().map(String::len).max().unwrap_or(0);
            let mut out = String::new();
            for (key, v) in fields {
                let shown = match v {
                    serde_json::Value::Null => continue,
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("{key:<width$}  {shown}\n"));
            }
            Ok(out.into_bytes())
        }
    }
}

fn parse_family(tag: &str, n: Option<u32>) -> Result<SeriesFamily, Failure> {
    let text = match n {
        Some(n) => format!("{tag}:{n}"),
        None => tag.to_string(),
    };
    text.parse().map_err(|e: cbinom::series::SeriesError| Failure::usage(e.to_string()))
}

fn run_eval(env: &Env, tag: &str, n: Option<u32>) -> Result<(Vec<u8>, i32), Failure> {
    let fam = parse_family(tag, n)?;
    let r = if fam.is_alternating() {
        evaluate_alternating(&fam, env.ctx, &env.eval)
    } else {
        evaluate(&fam, env.ctx, &env.eval)
    }
    .map_err(|e| Failure::usage(e.to_string()))?;
    let entry = catalog_get(&fam).ok();
    let closed_value = entry.map(|e| e.closed_form.evaluate(env.ctx));
    let abs_error = closed_value.as_ref().map(|c| (&r.value - c).abs());
    let pass = abs_error.as_ref().map(|e| env.passes(e));
    let code = if !r.converged {
        EXIT_NOT_CONVERGED
    } else if pass == Some(false) {
        EXIT_FAIL
    } else {
        EXIT_OK
    };
    let out = EvalOutput {
        family: fam.to_string(),
        digits: env.ctx.digits(),
        terms_used: r.terms_used,
        numeric_value: r.value,
        self_error: error_text(&r.self_error),
        converged: r.converged,
        closed_form: entry.map(|e| cf_format(&e.closed_form)),
        closed_form_value: closed_value,
        abs_error: abs_error.as_ref().map(error_text),
        tol: error_text(&env.tol),
        pass,
    };
    Ok((render_record(&out, env.format)?, code))
}

fn run_closed_form(env: &Env, tag: Option<&str>, n: Option<u32>, expr: Option<&str>) -> Result<(Vec<u8>, i32), Failure> {
    let out = match (tag, expr) {
        (_, Some(text)) => {
            let cf = cf_parse(text).map_err(|e| Failure::usage(e.to_string()))?;
            ClosedFormOutput {
                family: None,
                closed_form: cf_format(&cf),
                value: cf.evaluate(env.ctx),
                source: None,
                disputed: None,
            }
        }
        (Some(tag), None) => {
            let fam = parse_family(tag, n)?;
            let entry = catalog_get(&fam).map_err(|e| Failure::usage(e.to_string()))?;
            ClosedFormOutput {
                family: Some(fam.to_string()),
                closed_form: cf_format(&entry.closed_form),
                value: entry.closed_form.evaluate(env.ctx),
                source: Some(entry.source_label.clone()),
                disputed: Some(entry.disputed),
            }
        }
        (None, None) => return Err(Failure::usage("closed-form needs --family or --expr")),
    };
    Ok((render_record(&out, env.format)?, EXIT_OK))
}

fn run_lemma(env: &Env, id: Option<u32>, k: u64, suite: Option<&str>) -> Result<(Vec<u8>, i32), Failure> {
    if let Some(name) = suite {
        let suite: LemmaSuite = name.parse().map_err(Failure::from)?;
        let report = verify_targets(&[Target::Lemma(suite)], &env.verify_config(), &DisputedSet::default());
        let code = report.exit_code();
        return Ok((render_report(&report, env.format.into())?, code));
    }
    let id = id.ok_or_else(|| Failure::usage("lemma needs --id or --suite"))?;
    let c = lemma_check(id, k, env.ctx)?;
    let pass = if c.exact { c.residual == 0.0 } else { env.passes(&c.residual) };
    let residual = if c.exact && c.residual == 0.0 { "exact".to_string() } else { error_text(&c.residual) };
    let out = LemmaOutput {
        lemma: c.id,
        k: c.k,
        exact_value: c.exact_value,
        value: c.value,
        residual,
        tol: error_text(&env.tol),
        pass,
    };
    Ok((render_record(&out, env.format)?, if pass { EXIT_OK } else { EXIT_FAIL }))
}

fn run_logsine(env: &Env, n: Option<u32>, ls4: bool, level: Option<u32>) -> Result<(Vec<u8>, i32), Failure> {
    let out = if ls4 {
        let residual = ls4_check(env.ctx).map_err(VerifyError::from)?;
        LogSineOutput {
            check: "LS4".into(),
            value: None,
            levels_used: None,
            self_error: None,
            residual: Some(error_text(&residual)),
            tol: error_text(&env.tol),
            pass: env.passes(&residual),
        }
    } else {
        let n = n.ok_or_else(|| Failure::usage("logsine needs --n or --ls4"))?;
        let mut opts = QuadratureOptions::new(env.ctx);
        if let Some(level) = level {
            opts = opts.with_level(level);
        }
        let m = log_sin_moment(n, &opts).map_err(VerifyError::from)?;
        let residual = if n >= 1 { Some(theorem1_residual(n, env.ctx).map_err(VerifyError::from)?) } else { None };
        let pass = residual.as_ref().is_none_or(|r| env.passes(r));
        LogSineOutput {
            check: format!("MOMENT:{n}"),
            value: Some(m.value),
            levels_used: Some(m.levels_used),
            self_error: Some(error_text(&m.self_error)),
            residual: residual.as_ref().map(error_text),
            tol: error_text(&env.tol),
            pass,
        }
    };
    let code = if out.pass { EXIT_OK } else { EXIT_FAIL };
    Ok((render_record(&out, env.format)?, code))
}

fn load_disputed(io: &ReportIo) -> Result<DisputedSet, Failure> {
    match &io.disputed {
        Some(path) => Ok(DisputedSet::load(path)?),
        None if Path::new(DEFAULT_DISPUTED).is_file() => Ok(DisputedSet::load(Path::new(DEFAULT_DISPUTED))?),
        None => Ok(DisputedSet::default()),
    }
}

fn run_verify(env: &Env, all: bool, names: &[String], io: &ReportIo) -> Result<(Vec<u8>, i32), Failure> {
    let targets = if all {
        all_targets()
    } else {
        names.iter().map(|t| t.parse::<Target>()).collect::<Result<Vec<_>, _>>()?
    };
    let disputed = load_disputed(io)?;
    let report = verify_targets(&targets, &env.verify_config(), &disputed);
    emit_report(&report, env.format, io)
}

fn run_report(env: &Env, input: Option<&Path>, io: &ReportIo) -> Result<(Vec<u8>, i32), Failure> {
    match input {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| io_failure(path, e))?;
            let report = Report::from_json(&bytes)?;
            emit_report(&report, env.format, io)
        }
        None => run_verify(env, true, &[], io),
    }
}

fn emit_report(report: &Report, format: Format, io: &ReportIo) -> Result<(Vec<u8>, i32), Failure> {
    let bytes = render_report(report, format.into())?;
    let code = report.exit_code();
    match &io.output {
        Some(path) => {
            std::fs::write(path, &bytes).map_err(|e| io_failure(path, e))?;
            let s = &report.summary;
            let line = format!("summary: {} pass, {} fail, {} disputed\n", s.pass, s.fail, s.disputed);
            Ok((line.into_bytes(), code))
        }
        None => Ok((bytes, code)),
    }
}

fn dispatch(cli: &Cli) -> Result<(Vec<u8>, i32), Failure> {
    let env = Env::new(&cli.shared)?;
    match &cli.command {
        Command::Eval { family, n } => run_eval(&env, family, *n),
        Command::ClosedForm { family, n, expr } => run_closed_form(&env, family.as_deref(), *n, expr.as_deref()),
        Command::Verify { all, target, io } => run_verify(&env, *all, target, io),
        Command::Lemma { id, k, suite } => run_lemma(&env, *id, *k, suite.as_deref()),
        Command::Logsine { n, ls4, level } => run_logsine(&env, *n, *ls4, *level),
        Command::Report { input, io } => run_report(&env, input.as_deref(), io),
    }
}

/// Runs the CLI with `args` (including the program name), writing results to `out`
/// and diagnostics to stderr. Returns the process exit code.
pub fn cli_main_to<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok((bytes, code)) => {
            if let Err(e) = out.write_all(&bytes).and_then(|_| out.flush()) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    cli_main_to(args, &mut std::io::stdout().lock())
}
