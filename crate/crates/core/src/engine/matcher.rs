//! Path pattern matching over the physical graph.
//!
//! A logical hop `A-E->B` walks three physical nodes: object `A`, an edge
//! node named `E`, and object `B`, with stored edges `A -> e` and `e -> B`.
//! A backward hop `A<-E-B` requires `B -> e` and `e -> A`.

use crate::model::{Node, NodeId, NodeKind, TemporalGraph};
use crate::query::{Direction, EdgeStep, PathPattern};

/// The physical nodes walked by one edge step: `edges.len()` hops with
/// `via` holding the intermediate object nodes between them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Traversal {
    pub edges: Vec<NodeId>,
    pub via: Vec<NodeId>,
}

impl Traversal {
    pub fn depth(&self) -> usize {
        self.edges.len()
    }
}

/// One match of a path pattern: a node per node step and a traversal per
/// edge step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BindingRow {
    pub nodes: Vec<NodeId>,
    pub hops: Vec<Traversal>,
}

impl BindingRow {
    /// Physical node sequence from the first node step to the last.
    pub fn physical(&self) -> Vec<NodeId> {
        let mut out = vec![self.nodes[0]];
        for (i, t) in self.hops.iter().enumerate() {
            for (k, e) in t.edges.iter().enumerate() {
                out.push(*e);
                if k < t.via.len() {
                    out.push(t.via[k]);
                }
            }
            out.push(self.nodes[i + 1]);
        }
        out
    }

    /// Every node bound by the row: node steps, edge nodes, intermediates.
    pub fn all_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .copied()
            .chain(self.hops.iter().flat_map(|t| t.edges.iter().chain(&t.via).copied()))
    }
}

/// Predicates pushed into matching so rows are pruned as they grow.
pub(crate) struct Filters<'a> {
    /// Checked for the node bound at a node step.
    pub step: &'a dyn Fn(usize, &Node) -> bool,
    /// Checked for every physical node, including edge nodes and
    /// intermediates.
    pub any: &'a dyn Fn(&Node) -> bool,
}

impl Filters<'_> {
    pub(crate) fn none() -> Filters<'static> {
        Filters {
            step: &|_, _| true,
            any: &|_| true,
        }
    }
}

/// All bindings of `p` in `g`, in lexicographic order of bound ids.
///
/// A variable-length step `[n..m]` yields one row per expansion of depth
/// `n..=m`; the object nodes inside one expansion (both ends included) are
/// pairwise distinct and all carry the step's target label. An unbounded
/// step is the same as `[1..1]`.
pub fn match_path(g: &TemporalGraph, p: &PathPattern) -> Vec<BindingRow> {
    match_path_filtered(g, p, &Filters::none())
}

pub(crate) fn match_path_filtered(
    g: &TemporalGraph,
    p: &PathPattern,
    f: &Filters<'_>,
) -> Vec<BindingRow> {
    let mut rows = Vec::new();
    let mut partial = BindingRow {
        nodes: Vec::with_capacity(p.node_count()),
        hops: Vec::with_capacity(p.hops.len()),
    };
    for start in g.nodes_of_kind(NodeKind::Object) {
        if start.name == p.start.label && (f.any)(start) && (f.step)(0, start) {
            partial.nodes.push(start.id);
            extend(g, p, f, &mut partial, &mut rows);
            partial.nodes.pop();
        }
    }
    rows.sort();
    rows.dedup();
    rows
}

fn extend(
    g: &TemporalGraph,
    p: &PathPattern,
    f: &Filters<'_>,
    partial: &mut BindingRow,
    rows: &mut Vec<BindingRow>,
) {
    let hop_index = partial.hops.len();
    if hop_index == p.hops.len() {
        rows.push(partial.clone());
        return;
    }
    let hop = &p.hops[hop_index];
    let from = *partial.nodes.last().expect("path has a start");
    let (min, max) = hop
        .edge
        .bounds
        .map_or((1, 1), |b| (b.min as usize, b.max as usize));
    let mut found = Vec::new();
    let mut trail = Traversal {
        edges: Vec::new(),
        via: Vec::new(),
    };
    let mut visited = vec![from];
    expand(
        g,
        &hop.edge,
        &hop.node.label,
        f,
        from,
        (min, max),
        &mut trail,
        &mut visited,
        &mut found,
    );
    for (traversal, end) in found {
        let end_node = g.node(end).expect("matched node exists");
        if !(f.step)(hop_index + 1, end_node) {
            continue;
        }
        partial.hops.push(traversal);
        partial.nodes.push(end);
        extend(g, p, f, partial, rows);
        partial.nodes.pop();
        partial.hops.pop();
    }
}

/// Depth-first expansion of one edge step from `at`.
#[allow(clippy::too_many_arguments)]
fn expand(
    g: &TemporalGraph,
    edge: &EdgeStep,
    target: &str,
    f: &Filters<'_>,
    at: NodeId,
    (min, max): (usize, usize),
    trail: &mut Traversal,
    visited: &mut Vec<NodeId>,
    found: &mut Vec<(Traversal, NodeId)>,
) {
    for (e, next) in single_hops(g, at, edge, target, f) {
        if visited.contains(&next) {
            continue;
        }
        trail.edges.push(e);
        let depth = trail.edges.len();
        if depth >= min {
            found.push((trail.clone(), next));
        }
        if depth < max {
            visited.push(next);
            trail.via.push(next);
            expand(g, edge, target, f, next, (min, max), trail, visited, found);
            trail.via.pop();
            visited.pop();
        }
        trail.edges.pop();
    }
}

/// `(edge node, object node)` pairs one logical hop away from `at`.
fn single_hops(
    g: &TemporalGraph,
    at: NodeId,
    edge: &EdgeStep,
    target: &str,
    f: &Filters<'_>,
) -> Vec<(NodeId, NodeId)> {
    let is_edge = |n: &&Node| n.kind == NodeKind::Edge && n.name == edge.label && (f.any)(n);
    let is_target = |n: &&Node| n.kind == NodeKind::Object && n.name == target && (f.any)(n);
    let mut out = Vec::new();
    match edge.direction {
        Direction::Forward => {
            for e in g.successors(at).filter(is_edge) {
                out.extend(g.successors(e.id).filter(is_target).map(|o| (e.id, o.id)));
            }
        }
        Direction::Backward => {
            for e in g.predecessors(at).filter(is_edge) {
                out.extend(g.predecessors(e.id).filter(is_target).map(|o| (e.id, o.id)));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
