use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{compare, simulate, ComparisonTable, CostReport, PurchasePlan, SimulationError, SimulationWindow};
use crate::model::{DeploymentModel, Placement};
use crate::pricing::PriceCatalog;

/// One what-if option: a model variant and how its servers are bought.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub model: DeploymentModel,
    pub plan: PurchasePlan,
}

/// A comparison table plus the full report behind each row, in row order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioComparison {
    pub table: ComparisonTable,
    pub reports: Vec<(String, CostReport)>,
}

pub fn compare_scenarios(
    scenarios: &[Scenario],
    catalog: &PriceCatalog,
    window: SimulationWindow,
) -> Result<ScenarioComparison, SimulationError> {
    let reports = scenarios
        .iter()
        .map(|s| Ok((s.label.clone(), simulate(&s.model, catalog, window, &s.plan)?)))
        .collect::<Result<Vec<_>, SimulationError>>()?;
    finish(reports)
}

fn finish(reports: Vec<(String, CostReport)>) -> Result<ScenarioComparison, SimulationError> {
    let table = compare(reports.iter().map(|(label, r)| r.summary(label)).collect())?;
    Ok(ScenarioComparison { table, reports })
}

/// Where to re-place a model when costing it at another provider.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderTarget {
    pub label: String,
    pub provider: String,
    pub region: String,
    /// Server type renames; unlisted names are kept.
    #[serde(default)]
    pub sku_map: BTreeMap<String, String>,
    /// Storage type renames; unlisted names are kept.
    #[serde(default)]
    pub storage_map: BTreeMap<String, String>,
    /// Purchase plan for this target, replacing the shared one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PurchasePlan>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderMap {
    pub targets: Vec<ProviderTarget>,
}

impl ProviderTarget {
    /// The model with every cloud node moved to this target.
    pub fn apply(&self, model: &DeploymentModel) -> DeploymentModel {
        let rename = |map: &BTreeMap<String, String>, name: &mut String| {
            if let Some(to) = map.get(name) {
                name.clone_from(to);
            }
        };
        let mut out = model.clone();
        for node in &mut out.nodes {
            let Some(placement) = &mut node.placement else {
                continue;
            };
            *placement = Placement::new(&self.provider, &self.region);
            if let Some(sku) = node.vm_spec.as_mut().and_then(|v| v.sku.as_mut()) {
                rename(&self.sku_map, sku);
            }
            if let Some(db) = &mut node.database_spec {
                rename(&self.sku_map, &mut db.sku);
            }
            if let Some(storage) = &mut node.storage_spec {
                rename(&self.storage_map, &mut storage.storage_type);
            }
        }
        out
    }
}

/// Costs the same model at each target, in map order. A target's own
/// plan takes precedence over `plan`.
pub fn compare_providers(
    model: &DeploymentModel,
    catalog: &PriceCatalog,
    window: SimulationWindow,
    plan: &PurchasePlan,
    map: &ProviderMap,
) -> Result<ScenarioComparison, SimulationError> {
    let reports = map
        .targets
        .iter()
        .map(|t| {
            let plan = t.plan.as_ref().unwrap_or(plan);
            Ok((t.label.clone(), simulate(&t.apply(model), catalog, window, plan)?))
        })
        .collect::<Result<Vec<_>, SimulationError>>()?;
    finish(reports)
}
