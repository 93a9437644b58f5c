//! Month-by-month cost simulation over a deployment model, plus rollups,
//! summaries and side-by-side comparisons of scenarios and providers.

mod scenario;
mod simulate;
mod summary;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::calendar::{month_range, YearMonth};
use crate::diagnostics::Diagnostic;
use crate::elasticity::EvalError;
use crate::money::{Money, Quantity};
use crate::pricing::{Dimension, MissingRate, TierCharge, TransferScope};

pub use scenario::{compare_providers, compare_scenarios, ProviderMap, ProviderTarget, Scenario, ScenarioComparison};
pub use simulate::{simulate, simulate_from};
pub use summary::{compare, summarize, CompareError, ComparisonRow, ComparisonTable, SummaryRow};

/// Inclusive range of simulated months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationWindow {
    pub start: YearMonth,
    pub end: YearMonth,
}

impl SimulationWindow {
    pub fn new(start: YearMonth, end: YearMonth) -> Result<Self, SimulationError> {
        if end < start {
            return Err(SimulationError::InvalidWindow { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn month_count(&self) -> u32 {
        (self.start.months_until(self.end) + 1) as u32
    }

    pub fn months(&self) -> impl Iterator<Item = YearMonth> {
        month_range(self.start, self.end)
    }

    pub fn contains(&self, month: YearMonth) -> bool {
        self.start <= month && month <= self.end
    }
}

/// How a node's server hours are bought.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlanChoice {
    #[default]
    OnDemand,
    /// Uses the SKU's reserved option with this term, or its only reserved
    /// option when no term is given.
    Reserved {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        term_months: Option<u32>,
    },
}

/// Node id → purchase choice. Nodes not listed run on demand.
pub type PurchasePlan = BTreeMap<String, PlanChoice>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineDimension {
    Usage(Dimension),
    ReservationUpfront,
}

impl LineDimension {
    pub fn as_str(self) -> &'static str {
        match self {
            LineDimension::Usage(d) => d.as_str(),
            LineDimension::ReservationUpfront => "reservation_upfront",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LineDimension::Usage(d) => d.unit(),
            LineDimension::ReservationUpfront => "fee",
        }
    }
}

impl fmt::Display for LineDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a line's cost was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateBasis {
    Flat { unit_price: Money },
    Tiered { slices: Vec<TierCharge> },
    Upfront { fee: Money },
}

/// Simulated usage of one subject in one month.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UsageRecord {
    pub month: YearMonth,
    pub subject: String,
    pub dimension: LineDimension,
    pub quantity: Quantity,
    pub unit: &'static str,
}

/// One priced `(month, subject, dimension)` cell. For path lines `subject`
/// is the path id and `node` the endpoint being charged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostLine {
    pub month: YearMonth,
    pub subject: String,
    pub node: String,
    pub group: Option<String>,
    pub provider: String,
    pub region: String,
    pub dimension: LineDimension,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<TransferScope>,
    pub quantity: Quantity,
    pub unit: &'static str,
    pub basis: RateBasis,
    pub cost: Money,
}

impl CostLine {
    fn sort_key(&self) -> (YearMonth, &str, LineDimension) {
        (self.month, &self.subject, self.dimension)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub window: SimulationWindow,
    pub currency: String,
    pub lines: Vec<CostLine>,
    pub warnings: Vec<String>,
}

pub const UNGROUPED: &str = "(ungrouped)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RollupBy {
    Group,
    Node,
    Dimension,
    Provider,
    Month,
}

impl CostReport {
    pub fn total(&self) -> Money {
        self.lines.iter().map(|l| l.cost).sum()
    }

    /// Cost per window month, including months without lines.
    pub fn monthly_totals(&self) -> Vec<(YearMonth, Money)> {
        let mut totals: BTreeMap<YearMonth, Money> = self.window.months().map(|m| (m, Money::ZERO)).collect();
        for line in &self.lines {
            *totals.entry(line.month).or_default() += line.cost;
        }
        totals.into_iter().collect()
    }

    pub fn usage_records(&self) -> Vec<UsageRecord> {
        self.lines
            .iter()
            .map(|l| UsageRecord {
                month: l.month,
                subject: l.subject.clone(),
                dimension: l.dimension,
                quantity: l.quantity,
                unit: l.unit,
            })
            .collect()
    }

    pub fn summary(&self, label: &str) -> SummaryRow {
        let series: Vec<Money> = self.monthly_totals().into_iter().map(|(_, m)| m).collect();
        summarize(label, &series).expect("a window has at least one month")
    }

    /// Totals per key, sorted by key. Path lines count towards the charged
    /// endpoint's node, group and provider.
    pub fn rollup(&self, by: RollupBy) -> Vec<(String, Money)> {
        let mut totals: BTreeMap<String, Money> = BTreeMap::new();
        for line in &self.lines {
            let key = match by {
                RollupBy::Group => line.group.clone().unwrap_or_else(|| UNGROUPED.to_string()),
                RollupBy::Node => line.node.clone(),
                RollupBy::Dimension => line.dimension.as_str().to_string(),
                RollupBy::Provider => line.provider.clone(),
                RollupBy::Month => line.month.to_string(),
            };
            *totals.entry(key).or_default() += line.cost;
        }
        totals.into_iter().collect()
    }
}

pub fn rollup(report: &CostReport, by: RollupBy) -> Vec<(String, Money)> {
    report.rollup(by)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulationError {
    #[error("invalid simulation window {start}..{end}")]
    InvalidWindow { start: YearMonth, end: YearMonth },
    #[error("invalid model: {} error(s), first: {}", .0.len(), .0.first().map(ToString::to_string).unwrap_or_default())]
    InvalidModel(Vec<Diagnostic>),
    #[error("`{subject}` {dimension}: {source}")]
    MissingRate {
        subject: String,
        dimension: String,
        source: MissingRate,
    },
    #[error("node `{node}`: {reason}")]
    UnresolvedSku { node: String, reason: String },
    #[error("purchase plan for `{node}`: {reason}")]
    Plan { node: String, reason: String },
    #[error("`{subject}` {kind}: {source}")]
    Evaluation {
        subject: String,
        kind: String,
        source: EvalError,
    },
    #[error(transparent)]
    Compare(#[from] CompareError),
}
