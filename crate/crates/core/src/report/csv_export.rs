use crate::engine::CostReport;

pub const CSV_HEADER: [&str; 9] = ["month", "group", "node", "provider", "region", "dimension", "quantity", "unit", "cost"];

/// One row per cost line, in report order, with CRLF line ends and quoting
/// only where a field needs it. Costs are printed with two decimals.
pub fn to_csv(report: &CostReport) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("writing to memory");
    for line in &report.lines {
        let record = [
            line.month.to_string(),
            line.group.clone().unwrap_or_default(),
            line.node.clone(),
            line.provider.clone(),
            line.region.clone(),
            line.dimension.to_string(),
            line.quantity.to_string(),
            line.unit.to_string(),
            line.cost.to_string(),
        ];
        writer.write_record(&record).expect("writing to memory");
    }
    let bytes = writer.into_inner().expect("writing to memory");
    String::from_utf8(bytes).expect("fields are UTF-8")
}
