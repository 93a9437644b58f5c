use std::collections::HashMap;

use petgraph::graph::{DiGraph, EdgeIndex, NodeIndex};
use petgraph::visit::EdgeRef;

use super::{CommunicationPath, DeploymentModel, Node, ResourceRequirement};

/// The model as a directed graph: one vertex per node, one edge per
/// communication path. Cycles and self-loops are allowed.
#[derive(Debug, Clone)]
pub struct ModelGraph<'a> {
    model: &'a DeploymentModel,
    graph: DiGraph<usize, usize>,
    index: HashMap<&'a str, NodeIndex>,
}

/// Builds the graph of a validated model. Paths whose endpoints do not
/// resolve are skipped; `validate` reports them.
pub fn build_graph(model: &DeploymentModel) -> ModelGraph<'_> {
    let mut graph = DiGraph::with_capacity(model.nodes.len(), model.paths.len());
    let mut index = HashMap::with_capacity(model.nodes.len());
    for (i, node) in model.nodes.iter().enumerate() {
        let v = graph.add_node(i);
        index.entry(node.id.as_str()).or_insert(v);
    }
    for (i, path) in model.paths.iter().enumerate() {
        if let (Some(&from), Some(&to)) = (index.get(path.from_node.as_str()), index.get(path.to_node.as_str())) {
            graph.add_edge(from, to, i);
        }
    }
    ModelGraph { model, graph, index }
}

impl<'a> ModelGraph<'a> {
    pub fn model(&self) -> &'a DeploymentModel {
        self.model
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn vertex(&self, node_id: &str) -> Option<NodeIndex> {
        self.index.get(node_id).copied()
    }

    pub fn node(&self, v: NodeIndex) -> &'a Node {
        &self.model.nodes[self.graph[v]]
    }

    pub fn path(&self, e: EdgeIndex) -> &'a CommunicationPath {
        &self.model.paths[self.graph[e]]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &'a Node> + '_ {
        self.graph.node_indices().map(|v| self.node(v))
    }

    /// Edges as `(path, from, to)`, in declaration order.
    pub fn edges(&self) -> impl Iterator<Item = (&'a CommunicationPath, &'a Node, &'a Node)> + '_ {
        self.graph.edge_references().map(|e| (self.path(e.id()), self.node(e.source()), self.node(e.target())))
    }

    pub fn requirements(&self, v: NodeIndex) -> &'a [ResourceRequirement] {
        &self.node(v).requirements
    }

    pub fn volume(&self, e: EdgeIndex) -> &'a ResourceRequirement {
        &self.path(e).volume
    }

    pub fn successors(&self, node_id: &str) -> Vec<&'a str> {
        let Some(v) = self.vertex(node_id) else {
            return Vec::new();
        };
        let mut out: Vec<&str> = self.graph.neighbors(v).map(|w| self.node(w).id.as_str()).collect();
        out.sort_unstable();
        out
    }

    pub fn is_cyclic(&self) -> bool {
        petgraph::algo::is_cyclic_directed(&self.graph)
    }

    /// Adjacency as sorted `(from, to, path)` triples.
    pub fn adjacency(&self) -> Vec<(&'a str, &'a str, &'a str)> {
        let mut out: Vec<_> = self
            .edges()
            .map(|(p, from, to)| (from.id.as_str(), to.id.as_str(), p.id.as_str()))
            .collect();
        out.sort_unstable();
        out
    }
}
