use std::f64::consts::PI;
use std::fmt::Write as _;

use super::escape;
use crate::assess::{Category, ItemKind, RadarData};
use crate::engine::{CostReport, RollupBy, SummaryRow};
use crate::model::DeploymentModel;
use crate::money::Money;

#[derive(Debug, Clone, Copy, Default)]
pub struct HtmlOptions<'a> {
    pub title: &'a str,
    /// Rows for the summary table; the report's own summary when empty.
    pub summaries: &'a [SummaryRow],
    pub radar: Option<&'a RadarData>,
    pub model: Option<&'a DeploymentModel>,
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em;color:#222}\
table{border-collapse:collapse;margin:0.5em 0 1.5em}\
th,td{border:1px solid #ccc;padding:0.25em 0.6em}\
td.num{text-align:right;font-variant-numeric:tabular-nums}\
svg{background:#fafafa;border:1px solid #ddd}\
.warnings li{color:#8a4b00}";

/// A self-contained page: inline CSS and SVG, no scripts, no external
/// references. Numbers are printed exactly as in the CSV export.
pub fn to_html(report: &CostReport, options: &HtmlOptions<'_>) -> String {
    let title = if options.title.is_empty() { "Cost report" } else { options.title };
    let mut out = String::new();
    let _ = write!(
        out,
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n<h1>{}</h1>\n",
        escape(title),
        escape(title)
    );
    let _ = writeln!(
        out,
        "<p>Simulated {} to {} ({} months), amounts in {}.</p>",
        report.window.start,
        report.window.end,
        report.window.month_count(),
        escape(&report.currency)
    );

    summary_section(&mut out, report, options.summaries);
    monthly_section(&mut out, report);
    rollup_section(&mut out, report, "groups", "Cost by group", "Group", RollupBy::Group);
    rollup_section(&mut out, report, "dimensions", "Cost by resource", "Dimension", RollupBy::Dimension);
    warnings_section(&mut out, &report.warnings);
    if let Some(radar) = options.radar {
        radar_section(&mut out, radar);
    }
    if let Some(model) = options.model {
        topology_section(&mut out, model);
    }
    out.push_str("</body>\n</html>\n");
    out
}

fn summary_section(out: &mut String, report: &CostReport, rows: &[SummaryRow]) {
    let own;
    let rows = if rows.is_empty() {
        own = [report.summary("Total")];
        &own[..]
    } else {
        rows
    };
    out.push_str("<section id=\"summary\">\n<h2>Summary</h2>\n<table>\n<tr><th></th><th>1st month</th><th>Monthly avg.</th><th>Total</th></tr>\n");
    for row in rows {
        let _ = writeln!(
            out,
            "<tr><th>{}</th><td class=\"num\">{}</td><td class=\"num\">{}</td><td class=\"num\">{}</td></tr>",
            escape(&row.label),
            row.first_month,
            row.monthly_avg,
            row.total
        );
    }
    out.push_str("</table>\n</section>\n");
}

fn monthly_section(out: &mut String, report: &CostReport) {
    let totals = report.monthly_totals();
    let (width, height, pad) = (640.0, 240.0, 40.0);
    let max = totals.iter().map(|t| t.1).max().unwrap_or(Money::ZERO).to_f64().max(1.0);
    let step = if totals.len() > 1 {
        (width - 2.0 * pad) / (totals.len() - 1) as f64
    } else {
        0.0
    };
    let points: Vec<(f64, f64)> = totals
        .iter()
        .enumerate()
        .map(|(i, (_, total))| {
            let x = if totals.len() > 1 { pad + step * i as f64 } else { width / 2.0 };
            let y = height - pad - (total.to_f64() / max) * (height - 2.0 * pad);
            (x, y)
        })
        .collect();

    out.push_str("<section id=\"monthly\">\n<h2>Monthly cost</h2>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" role=\"img\">"
    );
    let _ = writeln!(
        out,
        "<line x1=\"{pad}\" y1=\"{y}\" x2=\"{x}\" y2=\"{y}\" stroke=\"#999\"/>",
        y = height - pad,
        x = width - pad
    );
    let polyline: Vec<String> = points.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
    let _ = writeln!(
        out,
        "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"{}\"/>",
        polyline.join(" ")
    );
    for ((month, total), (x, y)) in totals.iter().zip(&points) {
        let _ = writeln!(
            out,
            "<circle class=\"point\" cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"#1f77b4\" data-month=\"{month}\" data-value=\"{total}\"><title>{month}: {total}</title></circle>"
        );
    }
    if let (Some(first), Some(last)) = (totals.first(), totals.last()) {
        let _ = writeln!(
            out,
            "<text x=\"{pad}\" y=\"{}\" font-size=\"11\">{}</text>\n<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            height - pad / 3.0,
            first.0,
            width - pad,
            height - pad / 3.0,
            last.0
        );
    }
    out.push_str("</svg>\n<table>\n<tr><th>Month</th><th>Cost</th></tr>\n");
    for (month, total) in &totals {
        let _ = writeln!(
            out,
            "<tr data-month=\"{month}\"><td>{month}</td><td class=\"num\">{total}</td></tr>"
        );
    }
    out.push_str("</table>\n</section>\n");
}

fn rollup_section(out: &mut String, report: &CostReport, id: &str, heading: &str, key: &str, by: RollupBy) {
    let total = report.total();
    let _ = writeln!(
        out,
        "<section id=\"{id}\">\n<h2>{heading}</h2>\n<table>\n<tr><th>{key}</th><th>Cost</th><th>Share</th></tr>"
    );
    for (name, cost) in report.rollup(by) {
        let share = if total.is_zero() { 0.0 } else { 100.0 * cost.to_f64() / total.to_f64() };
        let _ = writeln!(
            out,
            "<tr data-key=\"{name}\"><td>{name}</td><td class=\"num\">{cost}</td><td class=\"num\">{share:.1}%</td></tr>",
            name = escape(&name)
        );
    }
    let _ = writeln!(
        out,
        "<tr><th>Total</th><td class=\"num\">{total}</td><td class=\"num\">100.0%</td></tr>\n</table>\n</section>"
    );
}

fn warnings_section(out: &mut String, warnings: &[String]) {
    let mut seen = std::collections::BTreeSet::new();
    let unique: Vec<&String> = warnings.iter().filter(|w| seen.insert(w.as_str())).collect();
    if unique.is_empty() {
        return;
    }
    out.push_str("<section id=\"warnings\" class=\"warnings\">\n<h2>Warnings</h2>\n<ul>\n");
    for warning in unique {
        let _ = writeln!(out, "<li>{}</li>", escape(warning));
    }
    out.push_str("</ul>\n</section>\n");
}

fn radar_section(out: &mut String, radar: &RadarData) {
    let (size, radius) = (300.0, 110.0);
    let centre = size / 2.0;
    let axis = |i: usize, value: f64| {
        let angle = -PI / 2.0 + 2.0 * PI * i as f64 / Category::ALL.len() as f64;
        (centre + radius * value / 5.0 * angle.cos(), centre + radius * value / 5.0 * angle.sin())
    };
    out.push_str("<section id=\"assessment\">\n<h2>Benefits and risks</h2>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\" role=\"img\">"
    );
    for (i, category) in Category::ALL.iter().enumerate() {
        let (x, y) = axis(i, 5.0);
        let _ = writeln!(
            out,
            "<line x1=\"{centre}\" y1=\"{centre}\" x2=\"{x:.1}\" y2=\"{y:.1}\" stroke=\"#ccc\"/><text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"10\" text-anchor=\"middle\">{category}</text>"
        );
    }
    for (kind, colour) in [(ItemKind::Benefit, "#2ca02c"), (ItemKind::Risk, "#d62728")] {
        let points: Vec<String> = radar
            .of_kind(kind)
            .map(|e| {
                let i = Category::ALL.iter().position(|c| *c == e.category).expect("known category");
                let (x, y) = axis(i, e.average);
                format!("{x:.1},{y:.1}")
            })
            .collect();
        if !points.is_empty() {
            let _ = writeln!(
                out,
                "<polygon class=\"{kind}\" points=\"{}\" fill=\"{colour}\" fill-opacity=\"0.2\" stroke=\"{colour}\"/>",
                points.join(" ")
            );
        }
    }
    out.push_str("</svg>\n<table>\n<tr><th>Kind</th><th>Category</th><th>Average</th><th>Items</th></tr>\n");
    for e in &radar.entries {
        let _ = writeln!(
            out,
            "<tr><td>{}</td><td>{}</td><td class=\"num\">{:.2}</td><td class=\"num\">{}</td></tr>",
            e.kind, e.category, e.average, e.item_count
        );
    }
    out.push_str("</table>\n</section>\n");
}

fn topology_section(out: &mut String, model: &DeploymentModel) {
    let _ = writeln!(out, "<section id=\"topology\">\n<h2>Model: {}</h2>\n<h3>Nodes</h3>\n<ul>", escape(&model.name));
    for node in &model.nodes {
        let place = node
            .placement
            .as_ref()
            .map_or_else(|| "outside the cloud".to_string(), |p| escape(&p.to_string()));
        let group = model
            .group_of(&node.id)
            .map(|g| format!(", group {}", escape(&g.label)))
            .unwrap_or_default();
        let _ = writeln!(out, "<li>{} ({}, {place}{group})</li>", escape(&node.id), node.kind.as_str());
    }
    out.push_str("</ul>\n");
    if !model.paths.is_empty() {
        out.push_str("<h3>Communication paths</h3>\n<ul>\n");
        for path in &model.paths {
            let _ = writeln!(
                out,
                "<li>{}: {} &rarr; {}, {} GB/month</li>",
                escape(&path.id),
                escape(&path.from_node),
                escape(&path.to_node),
                path.volume.baseline
            );
        }
        out.push_str("</ul>\n");
    }
    out.push_str("</section>\n");
}
