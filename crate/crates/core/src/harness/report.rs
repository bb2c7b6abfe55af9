use std::fmt::Write as _;
use std::path::Path;

use super::RunReport;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "# ffgscon-csv v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Config(format!("format must be json or csv, got {s:?}"))),
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or("NA".into(), num)
}

pub fn render_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => render_csv(report),
    }
}

fn render_csv(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CSV_HEADER}");
    let _ = writeln!(out, "# instance={} seed={} trials={}", r.instance, r.seed, r.trials);
    out.push_str("test,mode,trials,accept,reject,sigma\n");
    for e in &r.exact {
        let _ = writeln!(out, "{},exact,NA,{},{},NA", e.test, num(e.accept), num(e.reject));
    }
    for s in &r.sampled {
        let _ = writeln!(
            out,
            "{},sampled,{},{},{},{}",
            s.test,
            s.trials,
            num(s.rate),
            num((s.trials - s.accepts) as f64 / s.trials as f64),
            opt(s.sigma)
        );
    }
    if !r.lemmas.is_empty() {
        out.push_str("# lemmas\nrow,test,adversary,magnitude,measured,reject,threshold,margin,passed\n");
        for l in &r.lemmas {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                l.row,
                l.test,
                l.adversary.map_or("NA".into(), |k| k.name().to_string()),
                num(l.magnitude),
                num(l.measured),
                num(l.reject),
                l.threshold,
                num(l.margin),
                l.passed
            );
        }
    }
    out
}

pub fn parse_report(json: &str) -> Result<RunReport> {
    Ok(serde_json::from_str(json)?)
}

pub fn emit_report(report: &RunReport, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render_report(report, format))?;
    Ok(())
}
