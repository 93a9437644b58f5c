use super::{CostLine, CostReport, LineDimension, PlanChoice, PurchasePlan, RateBasis, SimulationError, SimulationWindow};
use crate::calendar::YearMonth;
use crate::diagnostics::Diagnostic;
use crate::elasticity::{MonthlySeries, UsageSchedule};
use crate::model::{build_graph, validate, DeploymentModel, Node, NodeKind, Placement, RequirementKind, ResourceRequirement};
use crate::money::Quantity;
use crate::pricing::{
    price_breakdown, price_quantity, reservation_charges_from, Dimension, Pricing, PriceCatalog, PurchaseOption, RateEntry,
    TransferScope,
};

/// Simulates `window` with patterns and reservation terms anchored at the
/// window's first month.
pub fn simulate(
    model: &DeploymentModel,
    catalog: &PriceCatalog,
    window: SimulationWindow,
    plan: &PurchasePlan,
) -> Result<CostReport, SimulationError> {
    simulate_from(model, catalog, window.start, window, plan)
}

/// Simulates `window` as a slice of a longer run starting at `epoch`:
/// elasticity patterns and reservation terms count from `epoch`, and only
/// months inside `window` are reported.
pub fn simulate_from(
    model: &DeploymentModel,
    catalog: &PriceCatalog,
    epoch: YearMonth,
    window: SimulationWindow,
    plan: &PurchasePlan,
) -> Result<CostReport, SimulationError> {
    let window = SimulationWindow::new(window.start, window.end)?;
    if epoch > window.start {
        return Err(SimulationError::InvalidWindow {
            start: epoch,
            end: window.end,
        });
    }
    let errors: Vec<Diagnostic> = validate(model).into_iter().filter(Diagnostic::is_error).collect();
    if !errors.is_empty() {
        return Err(SimulationError::InvalidModel(errors));
    }
    for node_id in plan.keys() {
        if model.node(node_id).is_none() {
            return Err(SimulationError::Plan {
                node: node_id.clone(),
                reason: "no such node".into(),
            });
        }
    }

    let mut sim = Simulation {
        model,
        catalog,
        epoch,
        window,
        lines: Vec::new(),
        warnings: catalog.warnings.clone(),
    };
    let graph = build_graph(model);
    for node in graph.vertices() {
        sim.node_lines(node, plan.get(&node.id).copied())?;
    }
    for (path, from, to) in graph.edges() {
        sim.path_lines(&path.id, &path.volume, from, to)?;
    }

    let mut lines = sim.lines;
    lines.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(CostReport {
        window,
        currency: catalog.currency.clone(),
        lines,
        warnings: sim.warnings,
    })
}

struct Simulation<'a> {
    model: &'a DeploymentModel,
    catalog: &'a PriceCatalog,
    epoch: YearMonth,
    window: SimulationWindow,
    lines: Vec<CostLine>,
    warnings: Vec<String>,
}

/// How one `(subject, dimension)` is priced for every month.
enum Rate<'a> {
    Entry(&'a RateEntry),
    Hourly(crate::money::Money),
}

fn usage_dimension(kind: RequirementKind) -> Option<Dimension> {
    Some(match kind {
        RequirementKind::VmHours => Dimension::VmHours,
        RequirementKind::StorageGb => Dimension::StorageGbMonth,
        RequirementKind::IoInRequests => Dimension::IoInRequests,
        RequirementKind::IoOutRequests => Dimension::IoOutRequests,
        RequirementKind::IoGb => Dimension::IoGb,
        RequirementKind::DataInGb => Dimension::DataInGb,
        RequirementKind::DataOutGb => Dimension::DataOutGb,
        RequirementKind::DataLinkGb => return None,
    })
}

/// Pricing class of a transfer between two placed endpoints.
pub(crate) fn transfer_scope(a: &Placement, b: &Placement) -> TransferScope {
    if a.provider != b.provider {
        TransferScope::Internet
    } else if a.region != b.region {
        TransferScope::InterRegion
    } else {
        TransferScope::IntraRegion
    }
}

impl<'a> Simulation<'a> {
    fn group_of(&self, node_id: &str) -> Option<String> {
        self.model.group_of(node_id).map(|g| g.id.clone())
    }

    fn series(&mut self, subject: &str, req: &ResourceRequirement) -> Result<MonthlySeries, SimulationError> {
        let schedule = UsageSchedule::from_texts(req.kind.class(), req.baseline, &req.patterns)
            .expect("validated patterns parse");
        let series = schedule
            .series(self.epoch, self.window.start, self.window.end)
            .map_err(|source| SimulationError::Evaluation {
                subject: subject.to_string(),
                kind: req.kind.to_string(),
                source,
            })?;
        let in_window: Vec<_> = series
            .clamps
            .iter()
            .filter(|c| self.window.contains(YearMonth::of(c.date)))
            .collect();
        if let Some(first) = in_window.first() {
            self.warnings.push(format!(
                "`{subject}` {}: usage clamped to 0 on {} day(s), first on {} by pattern {}",
                req.kind,
                in_window.len(),
                first.date,
                first.pattern + 1
            ));
        }
        Ok(series)
    }

    /// SKU used for a node's instance hours.
    fn server_sku(&self, node: &Node, placement: &Placement) -> Result<Option<String>, SimulationError> {
        if let Some(db) = &node.database_spec {
            return Ok(Some(db.sku.clone()));
        }
        let Some(vm) = &node.vm_spec else {
            return Ok(None);
        };
        if let Some(sku) = &vm.sku {
            return Ok(Some(sku.clone()));
        }
        let (cpu, ram) = (vm.cpu_ghz.unwrap_or_default(), vm.ram_gb.unwrap_or_default());
        self.catalog
            .resolve_sku(&placement.provider, &placement.region, cpu, ram)
            .map(|s| Some(s.name.clone()))
            .ok_or_else(|| SimulationError::UnresolvedSku {
                node: node.id.clone(),
                reason: format!("no server type in {placement} offers {cpu} GHz and {ram} GB RAM"),
            })
    }

    fn reserved_option(&self, node: &Node, placement: &Placement, sku: &str, term: Option<u32>) -> Result<&'a PurchaseOption, SimulationError> {
        let plan_err = |reason: String| SimulationError::Plan {
            node: node.id.clone(),
            reason,
        };
        let instance = self
            .catalog
            .sku(&placement.provider, &placement.region, sku)
            .ok_or_else(|| plan_err(format!("server type {placement}/{sku} is not in the catalog")))?;
        let mut options = instance.reserved().filter(|o| match (o, term) {
            (PurchaseOption::Reserved { term_months, .. }, Some(t)) => *term_months == t,
            _ => true,
        });
        match (options.next(), options.next()) {
            (Some(option), None) => Ok(option),
            (None, _) => Err(plan_err(format!("{placement}/{sku} has no matching reserved option"))),
            (Some(_), Some(_)) => Err(plan_err(format!("{placement}/{sku} has several reserved options; give `term_months`"))),
        }
    }

    fn node_lines(&mut self, node: &'a Node, choice: Option<PlanChoice>) -> Result<(), SimulationError> {
        let Some(placement) = &node.placement else {
            if !node.requirements.is_empty() {
                self.warnings.push(format!(
                    "remote node `{}`: its own requirements lie outside the cloud and are not priced",
                    node.id
                ));
            }
            if choice.is_some() {
                return Err(SimulationError::Plan {
                    node: node.id.clone(),
                    reason: "remote nodes cannot be reserved".into(),
                });
            }
            return Ok(());
        };

        let server_sku = match node.kind {
            NodeKind::VirtualMachine | NodeKind::HostedDatabase => self.server_sku(node, placement)?,
            _ => None,
        };
        let reserved = match choice.unwrap_or_default() {
            PlanChoice::OnDemand => None,
            PlanChoice::Reserved { term_months } => {
                let Some(sku) = &server_sku else {
                    return Err(SimulationError::Plan {
                        node: node.id.clone(),
                        reason: "only virtual machines and hosted databases can be reserved".into(),
                    });
                };
                Some(self.reserved_option(node, placement, sku, term_months)?)
            }
        };

        if let Some(option) = reserved {
            for (month, fee) in reservation_charges_from(option, self.epoch, self.window.start, self.window.end) {
                self.lines.push(CostLine {
                    month,
                    subject: node.id.clone(),
                    node: node.id.clone(),
                    group: self.group_of(&node.id),
                    provider: placement.provider.clone(),
                    region: placement.region.clone(),
                    dimension: LineDimension::ReservationUpfront,
                    scope: None,
                    quantity: Quantity::from_units(1),
                    unit: LineDimension::ReservationUpfront.unit(),
                    basis: RateBasis::Upfront { fee },
                    cost: fee,
                });
            }
        }

        for req in &node.requirements {
            let dimension = usage_dimension(req.kind).expect("nodes never carry data_link_gb");
            let (sku, scope) = match dimension {
                Dimension::VmHours => (server_sku.clone(), None),
                Dimension::DataInGb | Dimension::DataOutGb => (None, Some(TransferScope::Internet)),
                _ => (
                    node.storage_spec
                        .as_ref()
                        .map(|s| s.storage_type.clone())
                        .or_else(|| server_sku.clone()),
                    None,
                ),
            };
            let rate = match (dimension, reserved) {
                (Dimension::VmHours, Some(option)) => Rate::Hourly(option.hourly_rate()),
                _ => self.rate(&node.id, placement, dimension, sku.as_deref(), scope)?,
            };
            let series = self.series(&node.id, req)?;
            self.push_usage(&node.id, &node.id, placement, dimension, scope, &rate, &series);
        }
        Ok(())
    }

    fn rate(
        &self,
        subject: &str,
        placement: &Placement,
        dimension: Dimension,
        sku: Option<&str>,
        scope: Option<TransferScope>,
    ) -> Result<Rate<'a>, SimulationError> {
        match self.catalog.lookup_rate(&placement.provider, &placement.region, dimension, sku, scope) {
            Ok(entry) => Ok(Rate::Entry(entry)),
            Err(missing) => {
                // On-demand server hours may come from the SKU table instead.
                let on_demand = (dimension == Dimension::VmHours)
                    .then(|| sku.and_then(|s| self.catalog.sku(&placement.provider, &placement.region, s)))
                    .flatten()
                    .and_then(|s| s.on_demand());
                match on_demand {
                    Some(option) => Ok(Rate::Hourly(option.hourly_rate())),
                    None => Err(SimulationError::MissingRate {
                        subject: subject.to_string(),
                        dimension: dimension.to_string(),
                        source: missing,
                    }),
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push_usage(
        &mut self,
        subject: &str,
        node_id: &str,
        placement: &Placement,
        dimension: Dimension,
        scope: Option<TransferScope>,
        rate: &Rate<'_>,
        series: &MonthlySeries,
    ) {
        let group = self.group_of(node_id);
        for &(month, value) in &series.months {
            let quantity = Quantity::from_f64(value).expect("evaluation yields finite nonnegative values");
            let (basis, cost) = match rate {
                Rate::Hourly(price) => (RateBasis::Flat { unit_price: *price }, price.times(quantity)),
                Rate::Entry(entry) => {
                    let basis = match &entry.pricing {
                        Pricing::Flat { unit_price } => RateBasis::Flat { unit_price: *unit_price },
                        Pricing::Tiered { .. } => RateBasis::Tiered {
                            slices: price_breakdown(entry, quantity),
                        },
                    };
                    (basis, price_quantity(entry, quantity))
                }
            };
            self.lines.push(CostLine {
                month,
                subject: subject.to_string(),
                node: node_id.to_string(),
                group: group.clone(),
                provider: placement.provider.clone(),
                region: placement.region.clone(),
                dimension: LineDimension::Usage(dimension),
                scope,
                quantity,
                unit: dimension.unit(),
                basis,
                cost,
            });
        }
    }

    /// A path's volume leaves `from` as data_out and enters `to` as data_in.
    /// Endpoints outside the cloud are not charged.
    fn path_lines(&mut self, path_id: &str, volume: &ResourceRequirement, from: &'a Node, to: &'a Node) -> Result<(), SimulationError> {
        let scope = match (&from.placement, &to.placement) {
            (Some(a), Some(b)) => transfer_scope(a, b),
            _ => TransferScope::Internet,
        };
        let ends = [(from, Dimension::DataOutGb), (to, Dimension::DataInGb)];
        if ends.iter().all(|(n, _)| n.placement.is_none()) {
            return Ok(());
        }
        let series = self.series(path_id, volume)?;
        for (node, dimension) in ends {
            let Some(placement) = &node.placement else {
                continue;
            };
            let rate = self.rate(path_id, placement, dimension, None, Some(scope))?;
            self.push_usage(path_id, &node.id, placement, dimension, Some(scope), &rate, &series);
        }
        Ok(())
    }
}
