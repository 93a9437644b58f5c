use serde::Serialize;

use crate::money::Money;

/// Headline figures of one cost series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub label: String,
    pub first_month: Money,
    /// Average of the months after the first, `(total − first) / (n − 1)`,
    /// or the total itself for a single month.
    pub monthly_avg: Money,
    pub total: Money,
    pub months: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompareError {
    #[error("cannot summarize an empty series")]
    EmptySeries,
    #[error("a comparison needs at least two rows, got {0}")]
    TooFewRows(usize),
}

pub fn summarize(label: &str, monthly: &[Money]) -> Result<SummaryRow, CompareError> {
    let (&first, _) = monthly.split_first().ok_or(CompareError::EmptySeries)?;
    let total: Money = monthly.iter().sum();
    let n = monthly.len();
    let monthly_avg = if n == 1 { total } else { (total - first).div_int(n as u64 - 1) };
    Ok(SummaryRow {
        label: label.to_string(),
        first_month: first,
        monthly_avg,
        total,
        months: n as u32,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    #[serde(flatten)]
    pub summary: SummaryRow,
    /// `total / baseline total` rounded to the nearest integer; `None` for
    /// the baseline row and when the baseline total is zero.
    pub multiple: Option<i128>,
    /// `multiple` rendered as `+Nx`.
    pub difference: Option<String>,
    pub excess_over_baseline: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonTable {
    pub baseline_label: String,
    pub rows: Vec<ComparisonRow>,
    pub warnings: Vec<String>,
}

impl ComparisonTable {
    pub fn row(&self, label: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.summary.label == label)
    }

    pub fn baseline(&self) -> &ComparisonRow {
        self.row(&self.baseline_label).expect("baseline is one of the rows")
    }

    /// `total(a) − total(b)`.
    pub fn delta(&self, a: &str, b: &str) -> Option<Money> {
        Some(self.row(a)?.summary.total - self.row(b)?.summary.total)
    }
}

/// Ranks rows against the cheapest total. Rows keep their input order.
/// Equal cheapest totals are resolved by label and reported as a warning.
pub fn compare(rows: Vec<SummaryRow>) -> Result<ComparisonTable, CompareError> {
    if rows.len() < 2 {
        return Err(CompareError::TooFewRows(rows.len()));
    }
    let min_total = rows.iter().map(|r| r.total).min().expect("nonempty");
    let mut cheapest: Vec<&str> = rows
        .iter()
        .filter(|r| r.total == min_total)
        .map(|r| r.label.as_str())
        .collect();
    cheapest.sort_unstable();
    let baseline_label = cheapest[0].to_string();
    let mut warnings = Vec::new();
    if cheapest.len() > 1 {
        warnings.push(format!(
            "tie for cheapest total {} between {}; using `{baseline_label}` as baseline",
            min_total.to_grouped_string(),
            cheapest.iter().map(|l| format!("`{l}`")).collect::<Vec<_>>().join(", ")
        ));
    }

    let mut baseline_taken = false;
    let rows = rows
        .into_iter()
        .map(|summary| {
            let is_baseline = !baseline_taken && summary.label == baseline_label;
            baseline_taken |= is_baseline;
            let multiple = if is_baseline { None } else { summary.total.ratio_rounded(min_total) };
            ComparisonRow {
                difference: multiple.map(|n| format!("+{n}x")),
                multiple,
                excess_over_baseline: summary.total - min_total,
                summary,
            }
        })
        .collect();
    Ok(ComparisonTable {
        baseline_label,
        rows,
        warnings,
    })
}
