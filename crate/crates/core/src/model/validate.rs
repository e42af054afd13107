//! Integrity constraints 1–17 over a [`TemporalGraph`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Node, NodeId, NodeKind, TemporalGraph, Value};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub constraint: u8,
    pub offending_ids: Vec<NodeId>,
    pub message: String,
}

impl ConstraintViolation {
    fn new(constraint: u8, mut ids: Vec<NodeId>, message: impl Into<String>) -> Self {
        ids.sort();
        ids.dedup();
        ConstraintViolation {
            constraint,
            offending_ids: ids,
            message: message.into(),
        }
    }
}

/// `C05 3 5 duplicate value ...`
impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{:02}", self.constraint)?;
        for id in &self.offending_ids {
            write!(f, " {id}")?;
        }
        write!(f, " {}", self.message)
    }
}

fn id_constraint(kind: NodeKind) -> u8 {
    match kind {
        NodeKind::Object => 1,
        NodeKind::Edge => 2,
        NodeKind::Attribute => 3,
        NodeKind::Value => 4,
    }
}

fn connection_constraint(kind: NodeKind) -> u8 {
    match kind {
        NodeKind::Object => 6,
        NodeKind::Edge => 7,
        NodeKind::Attribute => 8,
        NodeKind::Value => 9,
    }
}

fn may_connect(kind: NodeKind, other: NodeKind) -> bool {
    use NodeKind::*;
    match kind {
        Object => matches!(other, Edge | Attribute),
        Edge => matches!(other, Object | Attribute),
        Attribute => matches!(other, Object | Edge | Value),
        Value => matches!(other, Attribute),
    }
}

/// Every violation of constraints 1–17, sorted by constraint number and ids.
/// An empty list means the graph is valid.
pub fn validate(g: &TemporalGraph) -> Vec<ConstraintViolation> {
    let mut out = Vec::new();
    check_ids(g, &mut out);
    check_connections(g, &mut out);
    check_single_edge(g, &mut out);
    for n in g.nodes() {
        match n.kind {
            NodeKind::Object => {}
            NodeKind::Edge => check_edge_node(g, n, &mut out),
            NodeKind::Attribute => {
                check_attribute_node(g, n, &mut out);
                check_value_set(g, n, &mut out);
            }
            NodeKind::Value => check_value_node(g, n, &mut out),
        }
    }
    out.sort();
    out.dedup_by(|a, b| a.constraint == b.constraint && a.offending_ids == b.offending_ids);
    out
}

/// Distinct neighbors of `n` restricted to kinds accepted by `pred`.
fn distinct_neighbors<'g>(
    g: &'g TemporalGraph,
    n: &Node,
    pred: impl Fn(NodeKind) -> bool,
) -> Vec<&'g Node> {
    let mut seen = BTreeSet::new();
    g.incident(n.id)
        .filter(|m| pred(m.kind) && seen.insert(m.id))
        .collect()
}

// 1–4. Ids collide only within a kind under the literal constraints; a
// collision across kinds is charged to the lower-numbered kind.
fn check_ids(g: &TemporalGraph, out: &mut Vec<ConstraintViolation>) {
    let mut by_id: BTreeMap<NodeId, Vec<NodeKind>> = BTreeMap::new();
    for n in g.nodes() {
        by_id.entry(n.id).or_default().push(n.kind);
    }
    for (id, kinds) in by_id.into_iter().filter(|(_, k)| k.len() > 1) {
        for (i, a) in kinds.iter().enumerate() {
            for b in &kinds[i + 1..] {
                let c = id_constraint(*a.min(b));
                let msg = if a == b {
                    format!("two {a} nodes share id {id}")
                } else {
                    format!("{a} and {b} nodes share id {id}")
                };
                out.push(ConstraintViolation::new(c, vec![id], msg));
            }
        }
    }
}

// 6–9.
fn check_connections(g: &TemporalGraph, out: &mut Vec<ConstraintViolation>) {
    for e in g.edges() {
        let (Some(a), Some(b)) = (g.node(e.from), g.node(e.to)) else {
            continue;
        };
        for (x, y) in [(a, b), (b, a)] {
            if !may_connect(x.kind, y.kind) {
                out.push(ConstraintViolation::new(
                    connection_constraint(x.kind),
                    vec![x.id, y.id],
                    format!("{} node {} may not connect to {} node {}", x.kind, x.id, y.kind, y.id),
                ));
            }
        }
    }
}

// 13.
fn check_single_edge(g: &TemporalGraph, out: &mut Vec<ConstraintViolation>) {
    let mut pairs: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
    for e in g.edges() {
        *pairs.entry(e.unordered()).or_default() += 1;
    }
    for ((a, b), count) in pairs.into_iter().filter(|(_, c)| *c > 1) {
        out.push(ConstraintViolation::new(
            13,
            vec![a, b],
            format!("{count} edges between nodes {a} and {b}"),
        ));
    }
}

// 10 and 14.
fn check_edge_node(g: &TemporalGraph, n: &Node, out: &mut Vec<ConstraintViolation>) {
    let objects = distinct_neighbors(g, n, |k| k == NodeKind::Object);
    if objects.len() != 2 {
        let mut ids = vec![n.id];
        ids.extend(objects.iter().map(|o| o.id));
        out.push(ConstraintViolation::new(
            10,
            ids,
            format!(
                "edge node {} connects {} object nodes, expected exactly 2",
                n.id,
                objects.len()
            ),
        ));
    }
    if n.interval.is_empty() {
        out.push(ConstraintViolation::new(
            14,
            vec![n.id],
            format!("edge node {} has an empty temporal element", n.id),
        ));
        return;
    }
    let outside: Vec<&Node> = objects
        .into_iter()
        .filter(|o| !n.interval.subset_of(&o.interval))
        .collect();
    if !outside.is_empty() {
        let mut ids = vec![n.id];
        ids.extend(outside.iter().map(|o| o.id));
        out.push(ConstraintViolation::new(
            14,
            ids,
            format!(
                "edge node {} element {} is not within its object nodes' elements",
                n.id, n.interval
            ),
        ));
    }
}

// 11 and 15.
fn check_attribute_node(g: &TemporalGraph, n: &Node, out: &mut Vec<ConstraintViolation>) {
    let owners = distinct_neighbors(g, n, NodeKind::is_owner);
    if owners.len() != 1 {
        let mut ids = vec![n.id];
        ids.extend(owners.iter().map(|o| o.id));
        out.push(ConstraintViolation::new(
            11,
            ids,
            format!(
                "attribute node {} has {} owners, expected exactly 1",
                n.id,
                owners.len()
            ),
        ));
    }
    if n.interval.is_empty() {
        out.push(ConstraintViolation::new(
            15,
            vec![n.id],
            format!("attribute node {} has an empty temporal element", n.id),
        ));
        return;
    }
    for o in owners.into_iter().filter(|o| !n.interval.subset_of(&o.interval)) {
        out.push(ConstraintViolation::new(
            15,
            vec![n.id, o.id],
            format!(
                "attribute node {} element {} is not within owner {} element {}",
                n.id, n.interval, o.id, o.interval
            ),
        ));
    }
}

// 12 and 16.
fn check_value_node(g: &TemporalGraph, n: &Node, out: &mut Vec<ConstraintViolation>) {
    let attrs = distinct_neighbors(g, n, |k| k == NodeKind::Attribute);
    if attrs.len() != 1 {
        let mut ids = vec![n.id];
        ids.extend(attrs.iter().map(|a| a.id));
        out.push(ConstraintViolation::new(
            12,
            ids,
            format!(
                "value node {} has {} attribute nodes, expected exactly 1",
                n.id,
                attrs.len()
            ),
        ));
    }
    if n.interval.is_empty() {
        out.push(ConstraintViolation::new(
            16,
            vec![n.id],
            format!("value node {} has an empty temporal element", n.id),
        ));
        return;
    }
    for a in attrs.into_iter().filter(|a| !n.interval.subset_of(&a.interval)) {
        out.push(ConstraintViolation::new(
            16,
            vec![n.id, a.id],
            format!(
                "value node {} element {} is not within attribute {} element {}",
                n.id, n.interval, a.id, a.interval
            ),
        ));
    }
}

// 5 and 17, over the value nodes of one attribute node.
fn check_value_set(g: &TemporalGraph, attr: &Node, out: &mut Vec<ConstraintViolation>) {
    let values = distinct_neighbors(g, attr, |k| k == NodeKind::Value);
    let mut by_value: BTreeMap<Value, Vec<NodeId>> = BTreeMap::new();
    for v in &values {
        by_value.entry(v.value()).or_default().push(v.id);
    }
    for (value, ids) in by_value.into_iter().filter(|(_, ids)| ids.len() > 1) {
        out.push(ConstraintViolation::new(
            5,
            ids,
            format!(
                "attribute node {} has several value nodes for `{value}`; they must be coalesced",
                attr.id
            ),
        ));
    }
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            if !a.interval.is_disjoint(&b.interval) {
                out.push(ConstraintViolation::new(
                    17,
                    vec![a.id, b.id],
                    format!(
                        "value nodes {} and {} of attribute {} overlap in time",
                        a.id, b.id, attr.id
                    ),
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{element, GraphBuilder, Node, NodeKind, TemporalGraph};
    use super::*;

    fn numbers(g: &TemporalGraph) -> Vec<u8> {
        validate(g).iter().map(|v| v.constraint).collect()
    }

    fn base() -> GraphBuilder {
        TemporalGraph::builder("t")
    }

    #[test]
    fn empty_and_fixtures() {
        assert!(validate(&TemporalGraph::empty("e")).is_empty());
        assert!(validate(&sample_graph()).is_empty());
        assert!(validate(&coalesced_values_fixture()).is_empty());
        let left = validate(&duplicated_values());
        assert_eq!(left.len(), 1);
        assert_eq!(left[0].constraint, 5);
        assert_eq!(left[0].offending_ids, vec![NodeId(3), NodeId(5)]);
        assert!(left[0].to_string().starts_with("C05 3 5 "));
    }

    #[test]
    fn edge_node_with_three_objects() {
        let g = base()
            .node(Node::new(1, NodeKind::Object, "P", element("[[1-9]]")))
            .node(Node::new(2, NodeKind::Object, "P", element("[[1-9]]")))
            .node(Node::new(3, NodeKind::Object, "P", element("[[1-9]]")))
            .node(Node::new(4, NodeKind::Edge, "F", element("[[2-3]]")))
            .edge(1, 4)
            .edge(4, 2)
            .edge(4, 3)
            .build()
            .unwrap();
        assert_eq!(numbers(&g), vec![10]);
    }

    #[test]
    fn cross_kind_duplicate_charged_to_lower_kind() {
        let g = base()
            .node(Node::new(7, NodeKind::Object, "P", element("[[1-9]]")))
            .node(Node::new(7, NodeKind::Attribute, "Name", element("[[1-9]]")))
            .build()
            .unwrap();
        assert!(numbers(&g).contains(&1));
    }

    #[test]
    fn empty_elements_by_kind() {
        let g = base()
            .node(Node::new(1, NodeKind::Object, "P", element("[[1-9]]")))
            .node(Node::new(2, NodeKind::Attribute, "Name", element("[]")))
            .edge(1, 2)
            .build()
            .unwrap();
        assert_eq!(numbers(&g), vec![15]);
        let g = base()
            .node(Node::new(1, NodeKind::Object, "P", element("[[1-9]]")))
            .node(Node::new(2, NodeKind::Attribute, "Name", element("[[1-9]]")))
            .node(Node::new(3, NodeKind::Value, "x", element("[]")))
            .edge(1, 2)
            .edge(2, 3)
            .build()
            .unwrap();
        assert_eq!(numbers(&g), vec![16]);
    }

    #[test]
    fn object_to_value_breaks_both_sides() {
        let g = base()
            .node(Node::new(1, NodeKind::Object, "P", element("[[1-9]]")))
            .node(Node::new(2, NodeKind::Attribute, "Name", element("[[1-9]]")))
            .node(Node::new(3, NodeKind::Value, "x", element("[[1-9]]")))
            .edge(1, 2)
            .edge(2, 3)
            .edge(1, 3)
            .build()
            .unwrap();
        assert_eq!(numbers(&g), vec![6, 9]);
    }
}
