use std::fmt::Write as _;
use std::str::FromStr;

use super::{Report, VerifyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(VerifyError::Report(format!("unknown format '{other}'"))),
        }
    }
}

fn status(pass: bool, disputed: bool) -> &'static str {
    match (disputed, pass) {
        (true, _) => "DISPUTED",
        (false, true) => "pass",
        (false, false) => "FAIL",
    }
}

fn render_text(report: &Report) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "cbinom {} | digits {} | tol {} | K0 {} | em_order {}",
        c.version, c.digits, c.tol, c.cutoff, c.em_order
    );
    let width = report.records.iter().map(|r| r.target.len()).max().unwrap_or(6).max(6);
    let _ = writeln!(out, "{:<width$}  {:<8}  {:<12}  value", "target", "status", "abs_error");
    for r in &report.records {
        let _ = writeln!(
            out,
            "{:<width$}  {:<8}  {:<12}  {}",
            r.target,
            status(r.pass, r.disputed),
            r.abs_error,
            r.numeric_value
        );
        if !r.pass || r.disputed {
            if !r.closed_form.is_empty() {
                let _ = writeln!(out, "{:<width$}    closed form {} = {}", "", r.closed_form, r.closed_form_value);
            }
            if let Some(note) = &r.note {
                let _ = writeln!(out, "{:<width$}    {note}", "");
            }
        }
    }
    let s = &report.summary;
    let _ = writeln!(out, "summary: {} pass, {} fail, {} disputed", s.pass, s.fail, s.disputed);
    out
}

fn render_csv(report: &Report) -> Result<Vec<u8>, VerifyError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.records {
        w.serialize(r).map_err(|e| VerifyError::Report(e.to_string()))?;
    }
    w.into_inner().map_err(|e| VerifyError::Report(e.to_string()))
}

pub fn render_report(report: &Report, format: ReportFormat) -> Result<Vec<u8>, VerifyError> {
    match format {
        ReportFormat::Text => Ok(render_text(report).into_bytes()),
        ReportFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(report).map_err(|e| VerifyError::Report(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        ReportFormat::Csv => render_csv(report),
    }
}
