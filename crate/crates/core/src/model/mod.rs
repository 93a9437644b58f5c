//! Deployment models: the nodes, artifacts and communication paths of the
//! system being costed, in a strict JSON document format.

mod graph;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagnostics::Diagnostic;
use crate::elasticity::ResourceClass;

pub use graph::{build_graph, ModelGraph};
pub use validate::validate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeploymentModel {
    pub name: String,
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub artifacts: Vec<ArtifactItem>,
    #[serde(default)]
    pub bindings: Vec<DeploymentBinding>,
    #[serde(default)]
    pub paths: Vec<CommunicationPath>,
    #[serde(default)]
    pub groups: Vec<Group>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    VirtualMachine,
    VirtualStorage,
    HostedDatabase,
    RemoteNode,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::VirtualMachine => "virtual_machine",
            NodeKind::VirtualStorage => "virtual_storage",
            NodeKind::HostedDatabase => "hosted_database",
            NodeKind::RemoteNode => "remote_node",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<Placement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vm_spec: Option<VmSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub storage_spec: Option<StorageSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub database_spec: Option<DatabaseSpec>,
    #[serde(default)]
    pub requirements: Vec<ResourceRequirement>,
}

impl Node {
    pub fn requirement(&self, kind: RequirementKind) -> Option<&ResourceRequirement> {
        self.requirements.iter().find(|r| r.kind == kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    pub provider: String,
    pub region: String,
}

impl Placement {
    pub fn new(provider: impl Into<String>, region: impl Into<String>) -> Self {
        Self {
            provider: provider.into(),
            region: region.into(),
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.provider, self.region)
    }
}

/// A virtual machine is sized either by a catalog server type (`sku`) or by
/// raw requirements (`cpu_ghz` + `ram_gb`) resolved against the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VmSpec {
    pub operating_system: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sku: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpu_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ram_gb: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageSpec {
    pub storage_type: String,
}

/// A hosted database is priced as one catalog SKU for both its instance
/// hours and its storage-family dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatabaseSpec {
    pub engine: String,
    pub sku: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    Application,
    DataSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtifactItem {
    pub id: String,
    pub kind: ArtifactKind,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeploymentBinding {
    pub artifact_id: String,
    pub node_id: String,
}

/// Data flowing `from_node → to_node`; `volume` is in GB per month.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommunicationPath {
    pub id: String,
    pub from_node: String,
    pub to_node: String,
    pub volume: ResourceRequirement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Group {
    pub id: String,
    pub label: String,
    pub node_ids: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequirementKind {
    VmHours,
    StorageGb,
    IoInRequests,
    IoOutRequests,
    IoGb,
    DataInGb,
    DataOutGb,
    DataLinkGb,
}

impl RequirementKind {
    pub const ALL: [RequirementKind; 8] = [
        RequirementKind::VmHours,
        RequirementKind::StorageGb,
        RequirementKind::IoInRequests,
        RequirementKind::IoOutRequests,
        RequirementKind::IoGb,
        RequirementKind::DataInGb,
        RequirementKind::DataOutGb,
        RequirementKind::DataLinkGb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RequirementKind::VmHours => "vm_hours",
            RequirementKind::StorageGb => "storage_gb",
            RequirementKind::IoInRequests => "io_in_requests",
            RequirementKind::IoOutRequests => "io_out_requests",
            RequirementKind::IoGb => "io_gb",
            RequirementKind::DataInGb => "data_in_gb",
            RequirementKind::DataOutGb => "data_out_gb",
            RequirementKind::DataLinkGb => "data_link_gb",
        }
    }

    pub fn class(self) -> ResourceClass {
        match self {
            RequirementKind::StorageGb => ResourceClass::Stock,
            _ => ResourceClass::Flow,
        }
    }

    /// Which node kinds may carry this requirement. `data_link_gb` belongs
    /// to communication paths only.
    pub fn allowed_on(self, node: NodeKind) -> bool {
        use NodeKind::*;
        use RequirementKind::*;
        match self {
            VmHours => matches!(node, VirtualMachine | HostedDatabase),
            StorageGb | IoInRequests | IoOutRequests | IoGb => {
                matches!(node, VirtualStorage | HostedDatabase)
            }
            DataInGb | DataOutGb => true,
            DataLinkGb => false,
        }
    }
}

impl fmt::Display for RequirementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceRequirement {
    pub kind: RequirementKind,
    pub baseline: f64,
    #[serde(default)]
    pub patterns: Vec<String>,
}

impl ResourceRequirement {
    pub fn new(kind: RequirementKind, baseline: f64) -> Self {
        Self {
            kind,
            baseline,
            patterns: Vec::new(),
        }
    }

    pub fn with_patterns<S: Into<String>>(mut self, patterns: impl IntoIterator<Item = S>) -> Self {
        self.patterns = patterns.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid model:\n{}", render(.0))]
    Invalid(Vec<Diagnostic>),
}

fn render(diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl ModelError {
    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        let (line, column, message) = (err.line(), err.column(), err.to_string());
        match err.classify() {
            serde_json::error::Category::Data => ModelError::Schema {
                line,
                column,
                message,
            },
            _ => ModelError::Syntax {
                line,
                column,
                message,
            },
        }
    }
}

/// Parses and validates a model document. Warnings do not fail parsing.
pub fn parse_model(document: &str) -> Result<DeploymentModel, ModelError> {
    let model: DeploymentModel = serde_json::from_str(document).map_err(ModelError::from_json)?;
    let errors: Vec<Diagnostic> = validate(&model).into_iter().filter(Diagnostic::is_error).collect();
    if errors.is_empty() {
        Ok(model)
    } else {
        Err(ModelError::Invalid(errors))
    }
}

/// Canonical pretty-printed JSON.
pub fn serialize_model(model: &DeploymentModel) -> String {
    serde_json::to_string_pretty(model).expect("model serializes")
}

impl DeploymentModel {
    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn group_of(&self, node_id: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.node_ids.iter().any(|n| n == node_id))
    }
}
