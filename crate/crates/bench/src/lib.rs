//! Workloads shared by the benchmarks.

use std::path::PathBuf;

use cloudcost_core::model::{CommunicationPath, Placement, RequirementKind, ResourceRequirement, VmSpec};
use cloudcost_core::{load_catalog, parse_model, DeploymentModel, Node, NodeKind, PriceCatalog, SimulationWindow};

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn demo_catalog() -> PriceCatalog {
    load_catalog(&fixture("demo_catalog.json")).expect("demo catalog loads")
}

pub fn demo_model(name: &str) -> DeploymentModel {
    parse_model(&fixture(name)).expect("demo model parses")
}

pub fn three_years() -> SimulationWindow {
    SimulationWindow::new("2011-01".parse().unwrap(), "2013-12".parse().unwrap()).unwrap()
}

/// `n` elastic web servers in aws/us-east, each sending traffic to one
/// remote client node.
pub fn web_farm(n: usize) -> DeploymentModel {
    let mut nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            id: format!("web{i}"),
            kind: NodeKind::VirtualMachine,
            placement: Some(Placement::new("aws", "us-east")),
            vm_spec: Some(VmSpec {
                operating_system: "linux".into(),
                sku: Some("standard.small".into()),
                cpu_ghz: None,
                ram_gb: None,
            }),
            storage_spec: None,
            database_spec: None,
            requirements: vec![ResourceRequirement::new(RequirementKind::VmHours, 744.0)
                .with_patterns(["temp: every month on weekends *0", "temp: every dec on 20-31 /2"])],
        })
        .collect();
    nodes.push(Node {
        id: "clients".into(),
        kind: NodeKind::RemoteNode,
        placement: None,
        vm_spec: None,
        storage_spec: None,
        database_spec: None,
        requirements: Vec::new(),
    });
    let paths = (0..n)
        .map(|i| CommunicationPath {
            id: format!("out{i}"),
            from_node: format!("web{i}"),
            to_node: "clients".into(),
            volume: ResourceRequirement::new(RequirementKind::DataLinkGb, 300.0)
                .with_patterns(["perm: every month +5", "temp: every month on weekdays *1.2"]),
        })
        .collect();
    DeploymentModel {
        name: format!("web farm x{n}"),
        nodes,
        artifacts: Vec::new(),
        bindings: Vec::new(),
        paths,
        groups: Vec::new(),
    }
}
