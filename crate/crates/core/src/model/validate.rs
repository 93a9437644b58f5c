use std::collections::{HashMap, HashSet};

use super::{ArtifactKind, DeploymentModel, NodeKind, RequirementKind, ResourceRequirement};
use crate::diagnostics::{sorted, Diagnostic};
use crate::elasticity::parse_pattern;

/// Checks every model invariant. Returns an empty list for a valid model;
/// diagnostics are sorted by location.
pub fn validate(model: &DeploymentModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut node_kinds: HashMap<&str, NodeKind> = HashMap::new();
    for (i, node) in model.nodes.iter().enumerate() {
        let at = format!("/nodes/{i}");
        if node.id.trim().is_empty() {
            out.push(Diagnostic::error(format!("{at}/id"), "node id is empty"));
        }
        if node_kinds.insert(&node.id, node.kind).is_some() {
            out.push(Diagnostic::error(format!("{at}/id"), format!("duplicate node id `{}`", node.id)));
        }

        match (&node.placement, node.kind) {
            (Some(_), NodeKind::RemoteNode) => out.push(Diagnostic::error(
                format!("{at}/placement"),
                format!("remote node `{}` lies outside the cloud and takes no placement", node.id),
            )),
            (None, kind) if kind != NodeKind::RemoteNode => out.push(Diagnostic::error(
                format!("{at}/placement"),
                format!("node `{}` needs a placement", node.id),
            )),
            (Some(p), _) => {
                if p.provider.trim().is_empty() {
                    out.push(Diagnostic::error(format!("{at}/placement/provider"), "provider is empty"));
                }
                if p.region.trim().is_empty() {
                    out.push(Diagnostic::error(format!("{at}/placement/region"), "region is empty"));
                }
            }
            _ => {}
        }

        let specs = [
            ("vm_spec", node.vm_spec.is_some(), NodeKind::VirtualMachine),
            ("storage_spec", node.storage_spec.is_some(), NodeKind::VirtualStorage),
            ("database_spec", node.database_spec.is_some(), NodeKind::HostedDatabase),
        ];
        for (field, present, owner) in specs {
            if present && node.kind != owner {
                out.push(Diagnostic::error(
                    format!("{at}/{field}"),
                    format!("`{field}` is only valid on {} nodes", owner.as_str()),
                ));
            } else if !present && node.kind == owner {
                out.push(Diagnostic::error(
                    format!("{at}/{field}"),
                    format!("{} node `{}` needs `{field}`", owner.as_str(), node.id),
                ));
            }
        }

        if let (Some(vm), NodeKind::VirtualMachine) = (&node.vm_spec, node.kind) {
            let raw = vm.cpu_ghz.is_some() || vm.ram_gb.is_some();
            match (&vm.sku, raw) {
                (Some(_), true) => out.push(Diagnostic::error(
                    format!("{at}/vm_spec"),
                    "give either `sku` or `cpu_ghz`/`ram_gb`, not both",
                )),
                (None, false) => out.push(Diagnostic::error(
                    format!("{at}/vm_spec"),
                    "needs `sku` or `cpu_ghz` and `ram_gb`",
                )),
                (Some(sku), false) if sku.trim().is_empty() => {
                    out.push(Diagnostic::error(format!("{at}/vm_spec/sku"), "sku is empty"))
                }
                (None, true) => {
                    for (field, value) in [("cpu_ghz", vm.cpu_ghz), ("ram_gb", vm.ram_gb)] {
                        match value {
                            Some(v) if v.is_finite() && v > 0.0 => {}
                            Some(_) => out.push(Diagnostic::error(
                                format!("{at}/vm_spec/{field}"),
                                format!("`{field}` must be positive"),
                            )),
                            None => out.push(Diagnostic::error(
                                format!("{at}/vm_spec/{field}"),
                                format!("raw server specification needs `{field}`"),
                            )),
                        }
                    }
                }
                _ => {}
            }
        }

        let mut seen = HashSet::new();
        for (j, req) in node.requirements.iter().enumerate() {
            let req_at = format!("{at}/requirements/{j}");
            if !req.kind.allowed_on(node.kind) {
                out.push(Diagnostic::error(
                    format!("{req_at}/kind"),
                    format!("`{}` is not a legal requirement on {} node `{}`", req.kind, node.kind.as_str(), node.id),
                ));
            }
            if !seen.insert(req.kind) {
                out.push(Diagnostic::error(
                    format!("{req_at}/kind"),
                    format!("node `{}` declares `{}` more than once", node.id, req.kind),
                ));
            }
            check_requirement(req, &req_at, &mut out);
        }
    }

    let mut artifact_kinds: HashMap<&str, ArtifactKind> = HashMap::new();
    for (i, artifact) in model.artifacts.iter().enumerate() {
        if artifact_kinds.insert(&artifact.id, artifact.kind).is_some() {
            out.push(Diagnostic::error(
                format!("/artifacts/{i}/id"),
                format!("duplicate artifact id `{}`", artifact.id),
            ));
        }
    }

    for (i, binding) in model.bindings.iter().enumerate() {
        let at = format!("/bindings/{i}");
        let artifact = artifact_kinds.get(binding.artifact_id.as_str());
        let node = node_kinds.get(binding.node_id.as_str());
        if artifact.is_none() {
            out.push(Diagnostic::error(
                format!("{at}/artifact_id"),
                format!("unknown artifact `{}`", binding.artifact_id),
            ));
        }
        if node.is_none() {
            out.push(Diagnostic::error(
                format!("{at}/node_id"),
                format!("unknown node `{}`", binding.node_id),
            ));
        }
        if let (Some(&artifact), Some(&node)) = (artifact, node) {
            let ok = match artifact {
                ArtifactKind::Application => matches!(node, NodeKind::VirtualMachine | NodeKind::RemoteNode),
                ArtifactKind::DataSet => matches!(node, NodeKind::VirtualStorage | NodeKind::HostedDatabase),
            };
            if !ok {
                out.push(Diagnostic::error(
                    at,
                    format!(
                        "artifact `{}` cannot be deployed on {} node `{}`",
                        binding.artifact_id,
                        node.as_str(),
                        binding.node_id
                    ),
                ));
            }
        }
    }

    let mut path_ids = HashSet::new();
    for (i, path) in model.paths.iter().enumerate() {
        let at = format!("/paths/{i}");
        if !path_ids.insert(path.id.as_str()) {
            out.push(Diagnostic::error(format!("{at}/id"), format!("duplicate path id `{}`", path.id)));
        }
        if node_kinds.contains_key(path.id.as_str()) {
            out.push(Diagnostic::error(
                format!("{at}/id"),
                format!("path id `{}` collides with a node id", path.id),
            ));
        }
        for (field, id) in [("from_node", &path.from_node), ("to_node", &path.to_node)] {
            if !node_kinds.contains_key(id.as_str()) {
                out.push(Diagnostic::error(format!("{at}/{field}"), format!("unknown node `{id}`")));
            }
        }
        if path.volume.kind != RequirementKind::DataLinkGb {
            out.push(Diagnostic::error(
                format!("{at}/volume/kind"),
                format!("path volume must be `data_link_gb`, found `{}`", path.volume.kind),
            ));
        }
        check_requirement(&path.volume, &format!("{at}/volume"), &mut out);
    }

    let mut group_ids = HashSet::new();
    let mut owner: HashMap<&str, &str> = HashMap::new();
    for (i, group) in model.groups.iter().enumerate() {
        let at = format!("/groups/{i}");
        if !group_ids.insert(group.id.as_str()) {
            out.push(Diagnostic::error(format!("{at}/id"), format!("duplicate group id `{}`", group.id)));
        }
        for (j, node_id) in group.node_ids.iter().enumerate() {
            let node_at = format!("{at}/node_ids/{j}");
            if !node_kinds.contains_key(node_id.as_str()) {
                out.push(Diagnostic::error(node_at, format!("unknown node `{node_id}`")));
            } else if let Some(previous) = owner.insert(node_id, &group.id) {
                out.push(Diagnostic::error(
                    node_at,
                    format!("node `{node_id}` is already in group `{previous}`; groups must be disjoint"),
                ));
            }
        }
    }

    sorted(out)
}

fn check_requirement(req: &ResourceRequirement, at: &str, out: &mut Vec<Diagnostic>) {
    if !(req.baseline.is_finite() && req.baseline >= 0.0) {
        out.push(Diagnostic::error(
            format!("{at}/baseline"),
            format!("baseline must be a nonnegative number, found {}", req.baseline),
        ));
    }
    for (k, text) in req.patterns.iter().enumerate() {
        if let Err(e) = parse_pattern(text) {
            out.push(Diagnostic::error(format!("{at}/patterns/{k}"), format!("`{text}`: {e}")));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::diagnostics::Severity;

    fn vm(id: &str) -> Node {
        Node {
            id: id.into(),
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
            requirements: vec![ResourceRequirement::new(RequirementKind::VmHours, 720.0)],
        }
    }

    fn model(nodes: Vec<Node>) -> DeploymentModel {
        DeploymentModel {
            name: "m".into(),
            nodes,
            artifacts: vec![],
            bindings: vec![],
            paths: vec![],
            groups: vec![],
        }
    }

    fn node_of(kind: NodeKind) -> Node {
        let mut n = vm("n");
        n.kind = kind;
        n.requirements.clear();
        n.vm_spec = None;
        match kind {
            NodeKind::VirtualMachine => n.vm_spec = vm("x").vm_spec,
            NodeKind::VirtualStorage => n.storage_spec = Some(StorageSpec { storage_type: "block".into() }),
            NodeKind::HostedDatabase => {
                n.database_spec = Some(DatabaseSpec { engine: "mysql".into(), sku: "db.small".into() })
            }
            NodeKind::RemoteNode => n.placement = None,
        }
        n
    }

    #[test]
    fn valid_model_has_no_diagnostics() {
        assert!(validate(&model(vec![vm("a"), vm("b")])).is_empty());
        for kind in [NodeKind::VirtualMachine, NodeKind::VirtualStorage, NodeKind::HostedDatabase, NodeKind::RemoteNode] {
            assert_eq!(validate(&model(vec![node_of(kind)])), vec![], "{kind:?}");
        }
    }

    #[test]
    fn every_illegal_pairing_yields_one_error() {
        // Enumerate the full node-kind × requirement-kind table.
        let table: &[(NodeKind, &[&str])] = &[
            (NodeKind::VirtualMachine, &["vm_hours", "data_in_gb", "data_out_gb"]),
            (NodeKind::VirtualStorage, &["storage_gb", "io_in_requests", "io_out_requests", "io_gb", "data_in_gb", "data_out_gb"]),
            (NodeKind::HostedDatabase, &["vm_hours", "storage_gb", "io_in_requests", "io_out_requests", "io_gb", "data_in_gb", "data_out_gb"]),
            (NodeKind::RemoteNode, &["data_in_gb", "data_out_gb"]),
        ];
        for &(kind, legal) in table {
            for req in RequirementKind::ALL {
                let mut node = node_of(kind);
                node.requirements.push(ResourceRequirement::new(req, 1.0));
                let diags = validate(&model(vec![node]));
                let expected = usize::from(!legal.contains(&req.as_str()));
                assert_eq!(diags.len(), expected, "{req} on {kind:?}: {diags:?}");
                if expected == 1 {
                    assert_eq!(diags[0].location, "/nodes/0/requirements/0/kind");
                }
            }
        }
    }

    #[test]
    fn overlapping_groups() {
        let mut m = model(vec![vm("a"), vm("b")]);
        m.groups = vec![
            Group { id: "g1".into(), label: "G1".into(), node_ids: vec!["a".into()] },
            Group { id: "g2".into(), label: "G2".into(), node_ids: vec!["a".into(), "b".into()] },
        ];
        let diags = validate(&m);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].severity, Severity::Error);
        assert_eq!(diags[0].location, "/groups/1/node_ids/0");
    }

    #[test]
    fn references_and_duplicates() {
        let mut m = model(vec![vm("a"), vm("a")]);
        m.paths.push(CommunicationPath {
            id: "p".into(),
            from_node: "a".into(),
            to_node: "ghost".into(),
            volume: ResourceRequirement::new(RequirementKind::DataLinkGb, -1.0),
        });
        m.artifacts.push(ArtifactItem { id: "d".into(), kind: ArtifactKind::DataSet, label: "D".into() });
        m.bindings.push(DeploymentBinding { artifact_id: "d".into(), node_id: "a".into() });
        let locations: Vec<String> = validate(&m).into_iter().map(|d| d.location).collect();
        assert_eq!(
            locations,
            vec!["/bindings/0", "/nodes/1/id", "/paths/0/to_node", "/paths/0/volume/baseline"]
        );
    }

    #[test]
    fn vm_spec_shapes() {
        let mut both = vm("a");
        both.vm_spec.as_mut().unwrap().cpu_ghz = Some(2.0);
        assert_eq!(validate(&model(vec![both])).len(), 1);

        let mut raw = vm("a");
        let spec = raw.vm_spec.as_mut().unwrap();
        spec.sku = None;
        spec.cpu_ghz = Some(2.4);
        spec.ram_gb = Some(0.0);
        let diags = validate(&model(vec![raw]));
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].location, "/nodes/0/vm_spec/ram_gb");

        let mut remote = node_of(NodeKind::RemoteNode);
        remote.placement = Some(Placement::new("aws", "us-east"));
        assert_eq!(validate(&model(vec![remote])).len(), 1);
    }

    #[test]
    fn bad_pattern_reports_column() {
        let mut a = vm("a");
        a.requirements[0].patterns.push("perm: every month %5".into());
        let diags = validate(&model(vec![a]));
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].location, "/nodes/0/requirements/0/patterns/0");
        assert!(diags[0].message.contains("column 19"), "{}", diags[0].message);
    }

    #[test]
    fn deterministic() {
        let mut m = model(vec![vm("a"), vm("a"), vm("")]);
        m.groups.push(Group { id: "g".into(), label: "".into(), node_ids: vec!["zz".into()] });
        assert_eq!(validate(&m), validate(&m.clone()));
    }
}
