//! Report emission: fixed-layout CSV and JSON with deterministic rendering.

use anyhow::{Context, Result};
use std::fmt::Write as _;
use std::path::Path;

use crate::tables::TableReport;

/// Round to `digits` significant digits.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(digits - 1 - magnitude);
    (x * factor).round() / factor
}

/// Render with exactly four significant digits (trailing zeros kept).
pub fn format_sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0.000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Fixed CSV layout: sender,voter1,voter2,voter3,basis,D1,D1_err,...,D4_err.
pub fn table_report_to_csv(report: &TableReport) -> String {
    let mut out = String::from(
        "sender,voter1,voter2,voter3,basis,D1,D1_err,D2,D2_err,D3,D3_err,D4,D4_err\n",
    );
    for row in &report.rows {
        let _ = write!(out, "{},{},{},{},{}", row.sender, row.actions[0], row.actions[1], row.actions[2], row.basis);
        for d in 0..4 {
            let _ = write!(out, ",{},{}", format_sig4(row.detectors[d]), format_sig4(row.errors[d]));
        }
        out.push('\n');
    }
    out
}

pub fn table_report_to_json(report: &TableReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

/// Write `content` to `path`, creating parent directories as needed.
pub fn persist(content: &str, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating directory {}", parent.display()))?;
        }
    }
    std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}
