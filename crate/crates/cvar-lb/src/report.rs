//! CSV and JSON rendering of experiment reports.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::config::OutputFormat;
use crate::error::CliError;
use crate::experiment::{ExperimentReport, ReportRow};

pub const CSV_HEADER: &str =
    "alpha,param_name,param_value,bound,t_star,empirical_cvar,exact_cvar,stderr,mc_slack,dominated";

const SIG_DIGITS: i32 = 12;

/// Shortest `%.12g` rendering: 12 significant digits, trailing zeros
/// dropped, scientific notation outside `1e-4 <= |v| < 1e12`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIG_DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

fn csv_line(row: &ReportRow) -> String {
    let name = match &row.subject {
        Some(s) => format!("{}[{s}]", row.param_name),
        None => row.param_name.clone(),
    };
    let dominated = row.dominated.map(|d| d.to_string()).unwrap_or_default();
    [
        format_number(row.alpha),
        name,
        format_number(row.param_value),
        format_number(row.bound),
        format_number(row.t_star),
        opt(row.empirical_cvar),
        opt(row.exact_cvar),
        opt(row.stderr),
        opt(row.mc_slack),
        dominated,
    ]
    .join(",")
}

pub fn write_csv<W: Write>(report: &ExperimentReport, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in &report.rows {
        writeln!(out, "{}", csv_line(row))?;
    }
    out.flush()
}

pub fn write_json<W: Write>(report: &ExperimentReport, mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    out.flush()
}

fn write_to<W: Write>(report: &ExperimentReport, format: OutputFormat, out: W) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(report, out),
        OutputFormat::Json => write_json(report, out),
    }
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit_report(
    report: &ExperimentReport,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let io_err = |source| CliError::Io {
                path: path.to_path_buf(),
                source,
            };
            let file = File::create(path).map_err(io_err)?;
            write_to(report, format, BufWriter::new(file)).map_err(io_err)
        }
        None => write_to(report, format, io::stdout().lock()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}
