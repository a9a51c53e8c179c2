use std::fmt::Write as _;

use serde::Serialize;

use crate::format::{full, short};

use super::{BenchReport, BenchmarkRecord};

/// Keys of each JSON record, in output order. CSV uses the same columns.
pub const JSON_KEYS: [&str; 9] = [
    "table",
    "method",
    "function",
    "x0",
    "paper_value",
    "computed_value",
    "log10_discrepancy",
    "status",
    "match",
];

#[derive(Serialize)]
struct Row<'a> {
    table: u8,
    method: &'a str,
    function: &'a str,
    x0: &'a str,
    paper_value: &'a str,
    computed_value: String,
    log10_discrepancy: Option<f64>,
    status: &'static str,
    #[serde(rename = "match")]
    matched: bool,
}

impl<'a> From<&'a BenchmarkRecord> for Row<'a> {
    fn from(r: &'a BenchmarkRecord) -> Self {
        Row {
            table: r.cell.table,
            method: r.cell.method.name(),
            function: &r.cell.function,
            x0: &r.cell.x0,
            paper_value: &r.cell.paper_value,
            computed_value: full(&r.computed_value),
            log10_discrepancy: r.log10_discrepancy,
            status: r.status.as_str(),
            matched: r.matched,
        }
    }
}

/// One JSON array of records with the keys in [`JSON_KEYS`]. `x0` and
/// `paper_value` are the bundled decimal text; `computed_value` is a string
/// with 17 significant digits.
pub fn render_json(report: &BenchReport) -> String {
    let rows: Vec<Row<'_>> = report.records.iter().map(Row::from).collect();
    serde_json::to_string_pretty(&rows).expect("records serialize")
}

/// CSV with a header row and the [`render_json`] columns.
pub fn render_csv(report: &BenchReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(JSON_KEYS).expect("in-memory write");
    for r in &report.records {
        let row = Row::from(r);
        let gap = row
            .log10_discrepancy
            .map(|g| format!("{g:.16e}"))
            .unwrap_or_default();
        writer
            .write_record([
                row.table.to_string(),
                row.method.to_string(),
                row.function.to_string(),
                row.x0.to_string(),
                row.paper_value.to_string(),
                row.computed_value,
                gap,
                row.status.to_string(),
                row.matched.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
}

/// Human-readable table with five significant digits, followed by the
/// summary line and diagnostics for mismatching cells.
pub fn render_text(report: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<5} {:<10} {:<4} {:<4} {:>13} {:>13} {:>8}  {:<22} match",
        "table", "method", "f", "x0", "published", "computed", "dlog10", "status"
    );
    for r in &report.records {
        let gap = r
            .log10_discrepancy
            .map_or_else(|| "-inf".to_string(), |g| format!("{g:+.2}"));
        let _ = writeln!(
            out,
            "{:<5} {:<10} {:<4} {:<4} {:>13} {:>13} {:>8}  {:<22} {}",
            r.cell.table,
            r.cell.method.name(),
            r.cell.function,
            r.cell.x0,
            r.cell.paper_value,
            short(&r.computed_value),
            gap,
            r.status.as_str(),
            if r.matched { "yes" } else { "NO" }
        );
    }
    let _ = writeln!(
        out,
        "\nmatched {}/{} cells ({:.1}%) within ±{} orders at {} bits; threshold {:.0}% -> {} [{:.2?}]",
        report.matched(),
        report.records.len(),
        100.0 * report.match_rate(),
        report.options.tolerance_orders,
        report.bits,
        100.0 * report.options.pass_rate,
        if report.passed() { "PASS" } else { "FAIL" },
        report.elapsed,
    );
    let mismatches: Vec<_> = report.mismatches().collect();
    if !mismatches.is_empty() {
        let _ = writeln!(out, "\nmismatching cells:");
        for r in mismatches {
            let _ = write!(
                out,
                "  table {} {} on {}: published {}, computed {} ({}, {} steps)",
                r.cell.table,
                r.cell.method.name(),
                r.cell.function,
                r.cell.paper_value,
                short(&r.computed_value),
                r.status.as_str(),
                r.steps,
            );
            if let Some(alt) = &r.alternative {
                let _ = write!(
                    out,
                    "; closer after {} iterations (dlog10 {:+.2})",
                    alt.iterations, alt.log10_discrepancy
                );
            }
            if let Some(other) = &r.resembles {
                let _ = write!(out, "; equals the published {other} value of this table");
            }
            if let Some(detail) = &r.detail {
                let _ = write!(out, "; {detail}");
            }
            out.push('\n');
        }
    }
    out
}
