use std::collections::{BTreeMap, BTreeSet};

use super::{NodeId, NodeKind, TemporalGraph, Value};
use crate::temporal::TemporalElement;

/// Merges same-valued value nodes under each attribute node.
///
/// The lowest id of each group survives and takes the union of the group's
/// elements; the others are dropped with their edges. Expects constraints
/// 1–4 and 6–13 to hold.
pub fn coalesce_values(g: &TemporalGraph) -> TemporalGraph {
    let mut merged: BTreeMap<NodeId, TemporalElement> = BTreeMap::new();
    let mut dropped: BTreeSet<NodeId> = BTreeSet::new();
    for attr in g.nodes_of_kind(NodeKind::Attribute) {
        let mut groups: BTreeMap<Value, Vec<NodeId>> = BTreeMap::new();
        for v in g.values_of(attr.id) {
            groups.entry(v.value()).or_default().push(v.id);
        }
        for ids in groups.into_values().filter(|ids| ids.len() > 1) {
            let survivor = ids[0];
            let element = ids
                .iter()
                .filter_map(|id| g.node(*id))
                .fold(TemporalElement::empty(), |acc, n| acc.union(&n.interval));
            merged.insert(survivor, element);
            dropped.extend(&ids[1..]);
        }
    }
    if dropped.is_empty() {
        return g.clone();
    }
    let nodes = g
        .nodes()
        .iter()
        .filter(|n| !dropped.contains(&n.id))
        .map(|n| {
            let mut n = n.clone();
            if let Some(e) = merged.get(&n.id) {
                n.interval = e.clone();
            }
            n
        })
        .collect();
    let edges = g
        .edges()
        .iter()
        .filter(|e| !dropped.contains(&e.from) && !dropped.contains(&e.to))
        .copied()
        .collect();
    g.rebuild(nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{element, validate, Node};
    use super::*;

    #[test]
    fn duplicates_merge_into_coalesced() {
        let merged = coalesce_values(&duplicated_values());
        assert_eq!(merged.content(), coalesced_values_fixture().content());
        assert!(validate(&merged).is_empty());
    }

    #[test]
    fn fixpoint_on_compliant_graph() {
        let g = coalesced_values_fixture();
        assert_eq!(coalesce_values(&g), g);
    }

    #[test]
    fn three_duplicates_merge() {
        let g = TemporalGraph::builder("t")
            .node(Node::new(1, NodeKind::Object, "B", element("[[1-20]]")))
            .node(Node::new(2, NodeKind::Attribute, "Street", element("[[1-20]]")))
            .node(Node::new(5, NodeKind::Value, "x", element("[[3-4]]")))
            .node(Node::new(3, NodeKind::Value, "x", element("[[1-2]]")))
            .node(Node::new(9, NodeKind::Value, "x", element("[[8-9]]")))
            .edge(1, 2)
            .edge(2, 3)
            .edge(2, 5)
            .edge(2, 9)
            .build()
            .unwrap();
        let merged = coalesce_values(&g);
        let values: Vec<_> = merged.nodes_of_kind(NodeKind::Value).collect();
        assert_eq!(values.len(), 1);
        assert_eq!(values[0].id, NodeId(3));
        assert_eq!(values[0].interval, element("[[1-4],[8-9]]"));
        assert_eq!(merged.edges().len(), 2);
    }

    #[test]
    fn typed_equality_merges_integer_spellings() {
        let g = TemporalGraph::builder("t")
            .node(Node::new(1, NodeKind::Object, "B", element("[[1-20]]")))
            .node(Node::new(2, NodeKind::Attribute, "Bedrooms", element("[[1-20]]")))
            .node(Node::new(3, NodeKind::Value, "3", element("[[1-2]]")))
            .node(Node::new(4, NodeKind::Value, "03", element("[[5-6]]")))
            .edge(1, 2)
            .edge(2, 3)
            .edge(2, 4)
            .build()
            .unwrap();
        assert_eq!(coalesce_values(&g).nodes_of_kind(NodeKind::Value).count(), 1);
    }
}
