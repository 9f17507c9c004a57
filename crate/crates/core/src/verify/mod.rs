//! Batch verification harness: records, reports and the disputed-entry list.

mod disputed;
mod lemma;
mod render;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use disputed::DisputedSet;
pub use lemma::{lemma_check, LemmaCheck};
pub use render::{render_report, ReportFormat};
pub use suites::LemmaSuite;

use crate::closed_form::{catalog_all, catalog_get, ClosedForm, ClosedFormError};
use crate::euler::{relation_residual, EulerError, RelationId};
use crate::identities::{verify_convolution, ConvolutionId, IdentityError};
use crate::logsine::{ls4_check, theorem1_residual, LogSineError};
use crate::numerics::{pow10_neg, PrecisionContext, Real};
use crate::series::{evaluate, evaluate_alternating, EvalOptions, EvalResult, SeriesError, SeriesFamily};

/// Significant digits used for error and tolerance strings.
const ERROR_DIGITS: usize = 6;
/// Theorem residuals are checked for these orders.
pub const THEOREM_ORDERS: std::ops::RangeInclusive<u32> = 1..=5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown verification target '{0}'")]
    InvalidTarget(String),
    #[error("disputed list line {line}: {message}")]
    Disputed { line: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error("malformed report: {0}")]
    Report(String),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    LogSine(#[from] LogSineError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
}

impl VerifyError {
    /// True when the failure is an evaluation that missed its tolerance.
    pub fn is_not_converged(&self) -> bool {
        matches!(
            self,
            VerifyError::Identity(IdentityError::NotConverged { .. })
                | VerifyError::Euler(EulerError::Evaluation(IdentityError::NotConverged { .. }))
                | VerifyError::LogSine(LogSineError::NotConverged { .. })
                | VerifyError::LogSine(LogSineError::Evaluation(IdentityError::NotConverged { .. }))
        )
    }
}

/// Anything the harness can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Catalog(SeriesFamily),
    Convolution(ConvolutionId),
    Relation(RelationId),
    Theorem1(u32),
    Ls4,
    Lemma(LemmaSuite),
}

impl Target {
    pub fn kind(&self) -> RecordKind {
        match self {
            Target::Catalog(_) => RecordKind::Catalog,
            Target::Convolution(_) => RecordKind::Convolution,
            Target::Relation(_) => RecordKind::Relation,
            Target::Theorem1(_) | Target::Ls4 => RecordKind::LogSine,
            Target::Lemma(_) => RecordKind::Lemma,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Catalog(fam) => write!(f, "{fam}"),
            Target::Convolution(id) => write!(f, "{id}"),
            Target::Relation(id) => write!(f, "{id}"),
            Target::Theorem1(n) => write!(f, "THEOREM1:{n}"),
            Target::Ls4 => f.write_str("LS4"),
            Target::Lemma(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Target {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(id) = s.parse::<ConvolutionId>() {
            return Ok(Target::Convolution(id));
        }
        if let Ok(id) = s.parse::<RelationId>() {
            return Ok(Target::Relation(id));
        }
        if let Ok(suite) = s.parse::<LemmaSuite>() {
            return Ok(Target::Lemma(suite));
        }
        if s.eq_ignore_ascii_case("LS4") {
            return Ok(Target::Ls4);
        }
        if let Some(n) = s.strip_prefix("THEOREM1:") {
            return match n.trim().parse::<u32>() {
                Ok(n) if n >= 1 => Ok(Target::Theorem1(n)),
                _ => Err(VerifyError::InvalidTarget(s.to_string())),
            };
        }
        let fam: SeriesFamily = s.parse().map_err(|_| VerifyError::InvalidTarget(s.to_string()))?;
        catalog_get(&fam).map_err(|_| VerifyError::InvalidTarget(s.to_string()))?;
        Ok(Target::Catalog(fam))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Catalog,
    Convolution,
    Relation,
    LogSine,
    Lemma,
}

/// One verified item. All numbers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub target: String,
    pub kind: RecordKind,
    pub digits: u32,
    pub terms_used: Option<u64>,
    pub numeric_value: String,
    pub closed_form: String,
    pub closed_form_value: String,
    pub abs_error: String,
    pub tol: String,
    pub pass: bool,
    pub converged: bool,
    pub disputed: bool,
    pub note: Option<String>,
    pub elapsed_ms: u64,
}

/// Working precision, pass threshold and the evaluation knobs for catalog sums.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub ctx: PrecisionContext,
    pub tol: Real,
    pub eval: EvalOptions,
}

impl VerifyConfig {
    pub fn new(ctx: PrecisionContext, tol: Real) -> Self {
        Self { ctx, tol, eval: EvalOptions::new(ctx) }
    }

    /// `10^-(digits - 15)`: the acceptance threshold at 40 digits.
    pub fn default_tol(ctx: PrecisionContext) -> Real {
        Real::new(pow10_neg(ctx.digits().saturating_sub(15), ctx.bits()), ctx)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub digits: u32,
    pub tol: String,
    pub cutoff: u64,
    pub em_order: usize,
    pub version: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub disputed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub config: ReportConfig,
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: &VerifyConfig, records: Vec<VerificationRecord>) -> Self {
        let mut summary = Summary::default();
        for r in &records {
            if r.disputed {
                summary.disputed += 1;
            } else if r.pass {
                summary.pass += 1;
            } else {
                summary.fail += 1;
            }
        }
        Self {
            config: ReportConfig {
                digits: config.ctx.digits(),
                tol: config.tol.to_decimal(ERROR_DIGITS),
                cutoff: config.eval.cutoff,
                em_order: config.eval.em_order,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            records,
            summary,
        }
    }

    /// 3 when a non-disputed evaluation failed to converge, 1 when one failed, else 0.
    pub fn exit_code(&self) -> i32 {
        let live = || self.records.iter().filter(|r| !r.disputed);
        if live().any(|r| !r.converged) {
            3
        } else if live().any(|r| !r.pass) {
            1
        } else {
            0
        }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, VerifyError> {
        serde_json::from_slice(bytes).map_err(|e| VerifyError::Report(e.to_string()))
    }
}

/// Every target in report order: catalog, chains, relations, theorem orders, the
/// log-sine check and the lemma suites.
pub fn all_targets() -> Vec<Target> {
    let mut out: Vec<Target> = catalog_all().iter().map(|e| Target::Catalog(e.family)).collect();
    out.extend(ConvolutionId::ALL.map(Target::Convolution));
    out.extend(RelationId::ALL.map(Target::Relation));
    out.extend(THEOREM_ORDERS.map(Target::Theorem1));
    out.push(Target::Ls4);
    out.extend(LemmaSuite::ALL.map(Target::Lemma));
    out
}

struct Draft {
    terms_used: Option<u64>,
    numeric_value: String,
    closed_form: String,
    closed_form_value: String,
    abs_error: Real,
    pass_override: Option<bool>,
    converged: bool,
    note: Option<String>,
}

impl Draft {
    fn residual(residual: Real, digits: usize) -> Self {
        Self {
            terms_used: None,
            numeric_value: residual.to_decimal(digits),
            closed_form: "0".into(),
            closed_form_value: "0".into(),
            abs_error: residual,
            pass_override: None,
            converged: true,
            note: None,
        }
    }

    fn failed(err: VerifyError, ctx: PrecisionContext) -> Self {
        let converged = !err.is_not_converged();
        Self {
            terms_used: None,
            numeric_value: String::new(),
            closed_form: String::new(),
            closed_form_value: String::new(),
            abs_error: Real::zero(ctx),
            pass_override: Some(false),
            converged,
            note: Some(err.to_string()),
        }
    }
}

fn evaluate_family(fam: &SeriesFamily, config: &VerifyConfig) -> Result<EvalResult, SeriesError> {
    if fam.is_alternating() {
        evaluate_alternating(fam, config.ctx, &config.eval)
    } else {
        evaluate(fam, config.ctx, &config.eval)
    }
}

fn catalog_draft(fam: &SeriesFamily, cf: &ClosedForm, config: &VerifyConfig) -> Result<Draft, VerifyError> {
    let ctx = config.ctx;
    let digits = ctx.digits() as usize;
    let r = evaluate_family(fam, config)?;
    let cf_value = cf.evaluate(ctx);
    let err = (&r.value - &cf_value).abs();
    let note = (!r.converged).then(|| format!("not converged: self error {}", r.self_error.to_decimal(ERROR_DIGITS)));
    Ok(Draft {
        terms_used: Some(r.terms_used),
        numeric_value: r.value.to_decimal(digits),
        closed_form: cf.to_string(),
        closed_form_value: cf_value.to_decimal(digits),
        abs_error: err,
        pass_override: (!r.converged).then_some(false),
        converged: r.converged,
        note,
    })
}

fn draft(target: &Target, config: &VerifyConfig) -> Result<Draft, VerifyError> {
    let ctx = config.ctx;
    let digits = ctx.digits() as usize;
    Ok(match target {
        Target::Catalog(fam) => catalog_draft(fam, &catalog_get(fam)?.closed_form, config)?,
        Target::Convolution(id) => Draft::residual(verify_convolution(*id, ctx)?, ERROR_DIGITS),
        Target::Relation(id) => Draft::residual(relation_residual(*id, ctx)?, ERROR_DIGITS),
        Target::Theorem1(n) => Draft::residual(theorem1_residual(*n, ctx)?, ERROR_DIGITS),
        Target::Ls4 => Draft::residual(ls4_check(ctx)?, ERROR_DIGITS),
        Target::Lemma(suite) => {
            let out = suites::run_suite(*suite, ctx)?;
            let mut d = Draft::residual(out.residual, ERROR_DIGITS);
            if suite.is_exact() {
                d.numeric_value = if out.failure.is_none() { "exact".into() } else { "nonzero".into() };
            }
            if let Some((numeric, limit)) = out.numeric {
                d.numeric_value = numeric.to_decimal(digits);
                d.closed_form = "1/2*pi".into();
                d.closed_form_value = limit.to_decimal(digits);
            }
            d.pass_override = out.failure.as_ref().map(|_| false);
            d.note = Some(match out.failure {
                Some(f) => format!("{}; first failure {f}", out.note),
                None => out.note,
            });
            d
        }
    })
}

fn finish(target: String, kind: RecordKind, d: Draft, config: &VerifyConfig, started: Instant) -> VerificationRecord {
    let pass = d.pass_override.unwrap_or(d.abs_error <= config.tol);
    VerificationRecord {
        target,
        kind,
        digits: config.ctx.digits(),
        terms_used: d.terms_used,
        numeric_value: d.numeric_value,
        closed_form: d.closed_form,
        closed_form_value: d.closed_form_value,
        abs_error: d.abs_error.to_decimal(ERROR_DIGITS),
        tol: config.tol.to_decimal(ERROR_DIGITS),
        pass,
        converged: d.converged,
        disputed: false,
        note: d.note,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

/// Verifies one target; failures and non-convergence become a failing record, never an error.
pub fn verify_entry_with(target: &Target, config: &VerifyConfig) -> VerificationRecord {
    let started = Instant::now();
    let d = draft(target, config).unwrap_or_else(|e| Draft::failed(e, config.ctx));
    finish(target.to_string(), target.kind(), d, config, started)
}

pub fn verify_entry(target: &Target, ctx: PrecisionContext, tol: Real) -> VerificationRecord {
    verify_entry_with(target, &VerifyConfig::new(ctx, tol))
}

/// Checks a catalog family against an arbitrary closed form (used for harness sensitivity tests).
pub fn verify_closed_form(fam: &SeriesFamily, cf: &ClosedForm, config: &VerifyConfig) -> VerificationRecord {
    let started = Instant::now();
    let d = catalog_draft(fam, cf, config).unwrap_or_else(|e| Draft::failed(e, config.ctx));
    finish(fam.to_string(), RecordKind::Catalog, d, config, started)
}

/// Verifies `targets` in parallel; the output order follows `targets`.
pub fn verify_targets(targets: &[Target], config: &VerifyConfig, disputed: &DisputedSet) -> Report {
    let records = targets
        .par_iter()
        .map(|t| {
            let mut r = verify_entry_with(t, config);
            r.disputed = disputed.contains(t);
            r
        })
        .collect();
    Report::new(config, records)
}

pub fn verify_all(ctx: PrecisionContext, tol: Real) -> Report {
    verify_targets(&all_targets(), &VerifyConfig::new(ctx, tol), &DisputedSet::default())
}
