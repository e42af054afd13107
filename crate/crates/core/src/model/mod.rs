//! The temporal attribute graph.
//!
//! A graph holds four kinds of nodes (object, edge, attribute, value), each
//! carrying a name and a [`TemporalElement`], joined by directed structural
//! edges drawn object→edge→object and owner→attribute→value.
//!
//! [`TemporalGraph`] is immutable once built. It deliberately tolerates
//! duplicate ids, repeated edges and mis-typed connections so that
//! [`validate`] can report them; only dangling edges, self-loops, empty names
//! and empty object elements are refused at build time.

mod coalesce;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::temporal::{Instant, Interval, IntervalEnd, TemporalElement};

pub use coalesce::coalesce_values;
pub use validate::{validate, ConstraintViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Object,
    Edge,
    Attribute,
    Value,
}

impl NodeKind {
    pub const ALL: [NodeKind; 4] = [
        NodeKind::Object,
        NodeKind::Edge,
        NodeKind::Attribute,
        NodeKind::Value,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Object => "object",
            NodeKind::Edge => "edge",
            NodeKind::Attribute => "attribute",
            NodeKind::Value => "value",
        }
    }

    /// Object and edge nodes may own attributes.
    pub fn is_owner(self) -> bool {
        matches!(self, NodeKind::Object | NodeKind::Edge)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Typed literal held by a value node: integer when the text parses as one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Str(String),
}

impl Value {
    pub fn from_text(s: &str) -> Value {
        match s.parse::<i64>() {
            Ok(i) => Value::Int(i),
            Err(_) => Value::Str(s.to_string()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub name: String,
    pub interval: TemporalElement,
}

impl Node {
    pub fn new(id: u64, kind: NodeKind, name: impl Into<String>, interval: TemporalElement) -> Self {
        Node {
            id: NodeId(id),
            kind,
            name: name.into(),
            interval,
        }
    }

    /// The literal of a value node, typed.
    pub fn value(&self) -> Value {
        Value::from_text(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StructuralEdge {
    pub from: NodeId,
    pub to: NodeId,
}

impl StructuralEdge {
    pub fn new(from: u64, to: u64) -> Self {
        StructuralEdge {
            from: NodeId(from),
            to: NodeId(to),
        }
    }

    pub fn unordered(&self) -> (NodeId, NodeId) {
        if self.from <= self.to {
            (self.from, self.to)
        } else {
            (self.to, self.from)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {from}->{to} references missing node {missing}")]
    DanglingEdge {
        from: NodeId,
        to: NodeId,
        missing: NodeId,
    },
    #[error("edge {0}->{0} connects a node to itself")]
    SelfLoop(NodeId),
    #[error("node {0} has an empty name")]
    EmptyName(NodeId),
    #[error("object node {0} has an empty temporal element")]
    EmptyObjectElement(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is not an object or edge node")]
    NotAnOwner(NodeId),
    #[error("node {owner} has no attribute named `{name}`")]
    UnknownAttribute { owner: NodeId, name: String },
}

#[derive(Debug, Clone, Default)]
struct Adjacency {
    out: Vec<usize>,
    inc: Vec<usize>,
}

/// The database instance: an immutable temporal attribute graph.
#[derive(Debug, Clone)]
pub struct TemporalGraph {
    name: String,
    granularity: String,
    nodes: Vec<Node>,
    edges: Vec<StructuralEdge>,
    index: HashMap<NodeId, usize>,
    adjacency: Vec<Adjacency>,
}

pub const DEFAULT_GRANULARITY: &str = "year";

impl TemporalGraph {
    pub fn builder(name: impl Into<String>) -> GraphBuilder {
        GraphBuilder {
            name: name.into(),
            granularity: DEFAULT_GRANULARITY.to_string(),
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        TemporalGraph::builder(name)
            .build()
            .expect("empty graph is well-formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn granularity(&self) -> &str {
        &self.granularity
    }

    /// Nodes in ascending id order (duplicates, if any, in insertion order).
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Edges sorted by `(from, to)`; repeated edges are kept.
    pub fn edges(&self) -> &[StructuralEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.index.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn kind_of(&self, id: NodeId) -> Option<NodeKind> {
        self.node(id).map(|n| n.kind)
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(move |n| n.kind == kind)
    }

    fn slot(&self, id: NodeId) -> Result<usize, GraphError> {
        self.index.get(&id).copied().ok_or(GraphError::UnknownNode(id))
    }

    /// Ids with a stored edge `id -> x`, one entry per edge, in edge order.
    pub fn successors(&self, id: NodeId) -> impl Iterator<Item = &Node> + '_ {
        let adj = self.index.get(&id).map(|&i| &self.adjacency[i]);
        adj.into_iter()
            .flat_map(|a| a.out.iter())
            .map(|&j| &self.nodes[j])
    }

    /// Ids with a stored edge `x -> id`.
    pub fn predecessors(&self, id: NodeId) -> impl Iterator<Item = &Node> + '_ {
        let adj = self.index.get(&id).map(|&i| &self.adjacency[i]);
        adj.into_iter()
            .flat_map(|a| a.inc.iter())
            .map(|&j| &self.nodes[j])
    }

    /// Both directions, with multiplicity.
    pub(crate) fn incident(&self, id: NodeId) -> impl Iterator<Item = &Node> + '_ {
        self.successors(id).chain(self.predecessors(id))
    }

    /// Adjacent ids in either direction, ascending and de-duplicated,
    /// optionally restricted to one kind.
    pub fn neighbors(&self, id: NodeId, kind: Option<NodeKind>) -> Result<Vec<NodeId>, GraphError> {
        self.slot(id)?;
        let set: BTreeSet<NodeId> = self
            .incident(id)
            .filter(|n| kind.is_none_or(|k| n.kind == k))
            .map(|n| n.id)
            .collect();
        Ok(set.into_iter().collect())
    }

    /// Attribute nodes attached to `owner`, ascending by id.
    pub fn attributes_of(&self, owner: NodeId) -> Vec<&Node> {
        self.adjacent_of_kind(owner, NodeKind::Attribute)
    }

    /// Value nodes attached to an attribute node, ascending by id.
    pub fn values_of(&self, attribute: NodeId) -> Vec<&Node> {
        self.adjacent_of_kind(attribute, NodeKind::Value)
    }

    fn adjacent_of_kind(&self, id: NodeId, kind: NodeKind) -> Vec<&Node> {
        let mut out: Vec<&Node> = self.incident(id).filter(|n| n.kind == kind).collect();
        out.sort_by_key(|n| n.id);
        out.dedup_by_key(|n| n.id);
        out
    }

    /// All `(value, element)` pairs reachable owner→attribute(`name`)→value.
    ///
    /// With `at`, only pairs whose element contains that instant are kept,
    /// `Now` resolving to `now`.
    pub fn attribute_value_at(
        &self,
        owner: NodeId,
        name: &str,
        at: Option<Instant>,
        now: Instant,
    ) -> Result<Vec<(Value, TemporalElement)>, GraphError> {
        let node = self.node(owner).ok_or(GraphError::UnknownNode(owner))?;
        if !node.kind.is_owner() {
            return Err(GraphError::NotAnOwner(owner));
        }
        let attrs: Vec<&Node> = self
            .attributes_of(owner)
            .into_iter()
            .filter(|a| a.name == name)
            .collect();
        if attrs.is_empty() {
            return Err(GraphError::UnknownAttribute {
                owner,
                name: name.to_string(),
            });
        }
        let mut out: Vec<(Value, TemporalElement)> = attrs
            .iter()
            .flat_map(|a| self.values_of(a.id))
            .collect::<Vec<_>>()
            .into_iter()
            .filter(|v| at.is_none_or(|t| v.interval.contains_instant(t, now)))
            .map(|v| (v.value(), v.interval.clone()))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Smallest and largest fixed instants over all node elements, and
    /// whether any element ends at `Now`.
    pub fn instant_range(&self) -> Option<(Instant, Instant, bool)> {
        let mut acc: Option<(Instant, Instant)> = None;
        let mut has_now = false;
        for n in &self.nodes {
            has_now |= n.interval.ends_at_now();
            if let Some((lo, hi)) = n.interval.fixed_bounds() {
                acc = Some(match acc {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                });
            }
        }
        acc.map(|(lo, hi)| (lo, hi, has_now))
    }

    /// The instant `Now` resolves to when the caller supplies none: one past
    /// the largest fixed instant in the graph.
    pub fn default_now(&self) -> Instant {
        self.instant_range().map_or(0, |(_, hi, _)| hi + 1)
    }

    /// The sub-graph on `keep`, with every edge whose endpoints both survive.
    pub fn induced<F: Fn(&Node) -> bool>(&self, keep: F) -> TemporalGraph {
        let nodes: Vec<Node> = self.nodes.iter().filter(|n| keep(n)).cloned().collect();
        let ids: BTreeSet<NodeId> = nodes.iter().map(|n| n.id).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| ids.contains(&e.from) && ids.contains(&e.to))
            .copied()
            .collect();
        self.rebuild(nodes, edges)
    }

    /// A graph with the same name and granularity over a subset of this
    /// graph's nodes and edges.
    pub(crate) fn rebuild(&self, nodes: Vec<Node>, edges: Vec<StructuralEdge>) -> TemporalGraph {
        GraphBuilder {
            name: self.name.clone(),
            granularity: self.granularity.clone(),
            nodes,
            edges,
        }
        .build()
        .expect("subset of a well-formed graph is well-formed")
    }

    /// Node and edge sets as comparable values.
    pub fn content(&self) -> (Vec<Node>, Vec<StructuralEdge>) {
        (self.nodes.clone(), self.edges.clone())
    }
}

impl PartialEq for TemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.granularity == other.granularity
            && self.nodes == other.nodes
            && self.edges == other.edges
    }
}

impl Eq for TemporalGraph {}

/// Collects nodes and edges, then freezes them into a [`TemporalGraph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    name: String,
    granularity: String,
    nodes: Vec<Node>,
    edges: Vec<StructuralEdge>,
}

impl GraphBuilder {
    pub fn granularity(mut self, unit: impl Into<String>) -> Self {
        self.granularity = unit.into();
        self
    }

    pub fn node(mut self, node: Node) -> Self {
        self.nodes.push(node);
        self
    }

    pub fn edge(mut self, from: u64, to: u64) -> Self {
        self.edges.push(StructuralEdge::new(from, to));
        self
    }

    pub fn push_node(&mut self, node: Node) {
        self.nodes.push(node);
    }

    pub fn push_edge(&mut self, edge: StructuralEdge) {
        self.edges.push(edge);
    }

    pub fn build(self) -> Result<TemporalGraph, GraphError> {
        let GraphBuilder {
            name,
            granularity,
            mut nodes,
            mut edges,
        } = self;
        nodes.sort_by_key(|n| n.id);
        edges.sort();
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if n.name.is_empty() {
                return Err(GraphError::EmptyName(n.id));
            }
            if n.kind == NodeKind::Object && n.interval.is_empty() {
                return Err(GraphError::EmptyObjectElement(n.id));
            }
            index.entry(n.id).or_insert(i);
        }
        let mut adjacency = vec![Adjacency::default(); nodes.len()];
        for e in &edges {
            if e.from == e.to {
                return Err(GraphError::SelfLoop(e.from));
            }
            let lookup = |id: NodeId| {
                index.get(&id).copied().ok_or(GraphError::DanglingEdge {
                    from: e.from,
                    to: e.to,
                    missing: id,
                })
            };
            let (f, t) = (lookup(e.from)?, lookup(e.to)?);
            adjacency[f].out.push(t);
            adjacency[t].inc.push(f);
        }
        Ok(TemporalGraph {
            name,
            granularity,
            nodes,
            edges,
            index,
            adjacency,
        })
    }
}

/// Shorthand used across tests: `[[a-b],...]` text to element.
pub fn element(text: &str) -> TemporalElement {
    text.parse().expect("valid temporal element text")
}

/// Interval `[start, end]` with `end = None` meaning `Now`.
pub fn span(start: Instant, end: Option<Instant>) -> Interval {
    Interval::new(start, end.map_or(IntervalEnd::Now, IntervalEnd::At)).expect("start <= end")
}
