use std::io::Write;

use serde::Serialize;

use crate::args::Format;
use crate::config::Settings;
use crate::error::{CliError, Result};

/// A report that renders both as a fixed-header CSV table and as JSON.
pub trait Report: Serialize {
    fn header(&self) -> &'static [&'static str];
    fn rows(&self) -> Vec<Vec<String>>;
}

/// Six significant digits; scientific notation outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // round first so 0.9999996 becomes 1.00000, not 1.000000
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn cell(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

/// Grid coordinates print in shortest round-trip form.
pub fn coord(x: f64) -> String {
    format!("{x}")
}

pub fn render(report: &impl Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(report.header())?;
            for row in report.rows() {
                w.write_record(&row)?;
            }
            w.into_inner()
                .map_err(|e| CliError::Usage(format!("csv buffer: {e}")))
        }
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(report)
                .map_err(|e| CliError::Usage(format!("json encoding: {e}")))?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

/// Writes the report to `--out` or to `stdout`.
pub fn emit(report: &impl Report, settings: &Settings, stdout: &mut dyn Write) -> Result<()> {
    let bytes = render(report, settings.format)?;
    match &settings.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(&bytes).map_err(|source| CliError::Output {
            path: "<stdout>".into(),
            source,
        }),
    }
}
