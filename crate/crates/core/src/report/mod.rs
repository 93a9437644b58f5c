//! CSV, HTML and console renderings of cost reports and comparisons.
//!
//! Renderers work on the cent-rounded view of a report (see
//! [`to_cents`]), so every number printed in any format is a sum of the
//! same two-decimal line costs.

mod csv_export;
mod html;

use std::fmt::Write as _;

use crate::engine::{ComparisonTable, CostReport};

pub use csv_export::{to_csv, CSV_HEADER};
pub use html::{to_html, HtmlOptions};

/// The report with each line cost rounded half-to-even to cents.
pub fn to_cents(report: &CostReport) -> CostReport {
    let mut out = report.clone();
    for line in &mut out.lines {
        line.cost = line.cost.round_to_cents();
    }
    out
}

/// The comparison laid out like a provider cost table: one column per
/// row, then a difference row against the baseline.
pub fn render_comparison(table: &ComparisonTable, currency: &str) -> String {
    let mut cells: Vec<Vec<String>> = vec![vec![format!("Cost ({currency})")]];
    cells[0].extend(table.rows.iter().map(|r| r.summary.label.clone()));
    let money_row = |name: &str, f: &dyn Fn(&crate::engine::ComparisonRow) -> String| {
        let mut row = vec![name.to_string()];
        row.extend(table.rows.iter().map(f));
        row
    };
    cells.push(money_row("1st month", &|r| r.summary.first_month.to_grouped_string()));
    cells.push(money_row("Monthly avg.", &|r| r.summary.monthly_avg.to_grouped_string()));
    let months = table.rows.first().map_or(0, |r| r.summary.months);
    cells.push(money_row(&format!("Total, {months} months"), &|r| r.summary.total.to_grouped_string()));
    cells.push(money_row(&format!("Difference with {}", table.baseline_label), &|r| {
        r.difference.clone().unwrap_or_default()
    }));

    let columns = cells[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                let _ = write!(line, "{cell:<width$}", width = widths[0]);
            } else {
                let _ = write!(line, "  {cell:>width$}", width = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    for warning in &table.warnings {
        let _ = writeln!(out, "warning: {warning}");
    }
    out
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}
