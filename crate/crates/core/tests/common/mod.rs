//! Random valid models, catalogs and plans for engine property tests.
#![allow(dead_code)]

pub mod oracle;
pub mod tiers;

use cloudcost_core::engine::{PlanChoice, PurchasePlan, SimulationWindow};
use cloudcost_core::model::{
    CommunicationPath, DatabaseSpec, Group, Placement, RequirementKind, ResourceRequirement, StorageSpec, VmSpec,
};
use cloudcost_core::{load_catalog, DeploymentModel, Node, NodeKind, PriceCatalog, YearMonth};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const PROVIDERS: [&str; 2] = ["p0", "p1"];
pub const REGIONS: [&str; 2] = ["r0", "r1"];
pub const SERVER_SKUS: [&str; 2] = ["s1", "s2"];

pub const PATTERNS: [&str; 12] = [
    "perm: every month +17",
    "perm: every month -40",
    "perm: every jan *1.5",
    "temp: every month on weekends *0",
    "temp: every month on weekdays /2",
    "temp: every jun-aug on weekends /2",
    "temp: every dec on 25-30 *2",
    "temp: every nov-feb on mon-wed +3",
    "temp: every month on 15 ^0.5",
    "perm: every mar on 10 -1000",
    "temp: every month on sun -5",
    "perm: every month on 01 +0.25",
];

fn price(rng: &mut ChaCha8Rng, max_tenth_cents: u32) -> String {
    let tenths = rng.gen_range(0..=max_tenth_cents);
    format!("{}.{:03}", tenths / 1000, tenths % 1000)
}

fn flat(p: String) -> Value {
    json!({"flat": {"unit_price": p}})
}

/// A catalog covering every dimension the generated models use.
///
/// With `flat_only`, no entry is tiered. Transfer prices are split so that
/// every intra-region price is at most every inter-region or internet price.
pub fn random_catalog(rng: &mut ChaCha8Rng, flat_only: bool) -> PriceCatalog {
    let mut entries = Vec::new();
    let mut skus = Vec::new();
    for provider in PROVIDERS {
        for region in REGIONS {
            let mut add = |dimension: &str, sku: Option<&str>, scope: Option<&str>, pricing: Value| {
                let mut e = json!({"provider": provider, "region": region, "dimension": dimension, "pricing": pricing});
                if let Some(s) = sku {
                    e["sku"] = json!(s);
                }
                if let Some(s) = scope {
                    e["scope"] = json!(s);
                }
                entries.push(e);
            };
            for sku in SERVER_SKUS.iter().copied().chain(["db"]) {
                add("vm_hours", Some(sku), None, flat(price(rng, 900)));
            }
            for sku in ["block", "db"] {
                add("storage_gb_month", Some(sku), None, flat(price(rng, 200)));
                add("io_gb", Some(sku), None, flat(price(rng, 100)));
            }
            for dimension in ["data_in_gb", "data_out_gb"] {
                add(dimension, None, Some("intra_region"), flat(price(rng, 20)));
                add(dimension, None, Some("inter_region"), flat(format!("0.{:03}", rng.gen_range(20..=60))));
                let internet = if flat_only || rng.gen_bool(0.5) {
                    flat(format!("0.{:03}", rng.gen_range(20..=150)))
                } else {
                    let first = rng.gen_range(1..50);
                    json!({"tiered": {"tiers": [
                        {"upper_bound": first.to_string(), "unit_price": "0.150"},
                        {"upper_bound": (first + rng.gen_range(1..2000)).to_string(), "unit_price": format!("0.{:03}", rng.gen_range(80..=150))},
                        {"upper_bound": null, "unit_price": format!("0.{:03}", rng.gen_range(20..80))}
                    ]}})
                };
                add(dimension, None, Some("internet"), internet);
            }
            for sku in SERVER_SKUS {
                let hourly = rng.gen_range(10..=500u32);
                let term = [6, 12][rng.gen_range(0..2)];
                skus.push(json!({
                    "provider": provider, "region": region, "name": sku,
                    "purchase_options": [
                        {"kind": "on_demand", "hourly_rate": format!("0.{hourly:03}")},
                        {"kind": "reserved", "hourly_rate": format!("0.{:03}", hourly / 2),
                         "term_months": term, "upfront_fee": format!("{}.00", rng.gen_range(0..2000))}
                    ]
                }));
            }
        }
    }
    let doc = json!({"currency": "USD", "entries": entries, "skus": skus});
    load_catalog(&doc.to_string()).expect("generated catalog is valid")
}

fn requirement(rng: &mut ChaCha8Rng, kind: RequirementKind) -> ResourceRequirement {
    let baseline = match kind {
        RequirementKind::VmHours => rng.gen_range(0..=744) as f64,
        RequirementKind::StorageGb => rng.gen_range(0..=5000) as f64,
        _ => rng.gen_range(0..=3000) as f64 + [0.0, 0.5, 0.25][rng.gen_range(0..3)],
    };
    let count = rng.gen_range(0..=3);
    let patterns: Vec<&str> = PATTERNS.choose_multiple(rng, count).copied().collect();
    ResourceRequirement::new(kind, baseline).with_patterns(patterns)
}

fn placement(rng: &mut ChaCha8Rng) -> Placement {
    Placement::new(*PROVIDERS.choose(rng).unwrap(), *REGIONS.choose(rng).unwrap())
}

/// A valid model with 1 to 7 nodes, optional groups and up to 5 paths.
pub fn random_model(rng: &mut ChaCha8Rng) -> DeploymentModel {
    let mut nodes = Vec::new();
    for i in 0..rng.gen_range(1..=7) {
        let kind = [NodeKind::VirtualMachine, NodeKind::VirtualStorage, NodeKind::HostedDatabase, NodeKind::RemoteNode]
            [rng.gen_range(0..4)];
        let mut node = Node {
            id: format!("n{i}"),
            kind,
            placement: None,
            vm_spec: None,
            storage_spec: None,
            database_spec: None,
            requirements: Vec::new(),
        };
        let mut kinds = Vec::new();
        match kind {
            NodeKind::VirtualMachine => {
                node.placement = Some(placement(rng));
                node.vm_spec = Some(VmSpec {
                    operating_system: "linux".into(),
                    sku: Some(SERVER_SKUS.choose(rng).unwrap().to_string()),
                    cpu_ghz: None,
                    ram_gb: None,
                });
                kinds.push(RequirementKind::VmHours);
            }
            NodeKind::VirtualStorage => {
                node.placement = Some(placement(rng));
                node.storage_spec = Some(StorageSpec {
                    storage_type: "block".into(),
                });
                kinds.push(RequirementKind::StorageGb);
                if rng.gen_bool(0.5) {
                    kinds.push(RequirementKind::IoGb);
                }
            }
            NodeKind::HostedDatabase => {
                node.placement = Some(placement(rng));
                node.database_spec = Some(DatabaseSpec {
                    engine: "mysql".into(),
                    sku: "db".into(),
                });
                kinds.extend([RequirementKind::VmHours, RequirementKind::StorageGb]);
            }
            NodeKind::RemoteNode => {}
        }
        if node.placement.is_some() && rng.gen_bool(0.3) {
            kinds.push(RequirementKind::DataOutGb);
        }
        node.requirements = kinds.into_iter().map(|k| requirement(rng, k)).collect();
        nodes.push(node);
    }

    let mut paths = Vec::new();
    if nodes.len() >= 2 {
        for i in 0..rng.gen_range(0..=5) {
            let pair: Vec<&Node> = nodes.choose_multiple(rng, 2).collect();
            paths.push(CommunicationPath {
                id: format!("path{i}"),
                from_node: pair[0].id.clone(),
                to_node: pair[1].id.clone(),
                volume: requirement(rng, RequirementKind::DataLinkGb),
            });
        }
    }

    let mut groups = Vec::new();
    let mut ungrouped: Vec<String> = nodes.iter().map(|n| n.id.clone()).collect();
    ungrouped.shuffle(rng);
    for g in 0..rng.gen_range(0..=2) {
        let take = rng.gen_range(0..=ungrouped.len());
        let node_ids: Vec<String> = ungrouped.drain(..take).collect();
        if !node_ids.is_empty() {
            groups.push(Group {
                id: format!("g{g}"),
                label: format!("Group {g}"),
                node_ids,
            });
        }
    }

    DeploymentModel {
        name: "random".into(),
        nodes,
        artifacts: Vec::new(),
        bindings: Vec::new(),
        paths,
        groups,
    }
}

/// Reserves a random subset of the model's virtual machines.
pub fn random_plan(rng: &mut ChaCha8Rng, model: &DeploymentModel) -> PurchasePlan {
    model
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::VirtualMachine && rng.gen_bool(0.4))
        .map(|n| (n.id.clone(), PlanChoice::Reserved { term_months: None }))
        .collect()
}

pub fn random_window(rng: &mut ChaCha8Rng) -> SimulationWindow {
    let start = YearMonth::new(rng.gen_range(2010..=2013), rng.gen_range(1..=12)).unwrap();
    SimulationWindow::new(start, start.plus_months(rng.gen_range(0..24))).unwrap()
}
