//! Text renderings of result graphs.

use std::fmt::Write as _;

use tgraph_core::engine::QueryOutcome;
use tgraph_core::model::{NodeKind, TemporalGraph};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn shape(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Object => "ellipse",
        NodeKind::Edge => "diamond",
        NodeKind::Attribute => "box",
        NodeKind::Value => "plaintext",
    }
}

/// Graphviz drawing; node shape encodes the node kind.
pub fn dot(g: &TemporalGraph) -> String {
    let mut out = format!("digraph \"{}\" {{\n", escape(g.name()));
    for n in g.nodes() {
        writeln!(
            out,
            "  n{} [shape={}, label=\"{}\\n{}\"];",
            n.id,
            shape(n.kind),
            escape(&n.name),
            n.interval
        )
        .unwrap();
    }
    for e in g.edges() {
        writeln!(out, "  n{} -> n{};", e.from, e.to).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Tab-separated `alias, attribute, value, intervals` rows: one row per
/// object or edge node, then one per attribute value it carries.
pub fn table(out: &QueryOutcome) -> String {
    let g = &out.graph;
    let mut text = String::from("alias\tattribute\tvalue\tintervals\n");
    for n in g.nodes().iter().filter(|n| n.kind.is_owner()) {
        let alias = match out.aliases.get(&n.id) {
            Some(names) => names.iter().cloned().collect::<Vec<_>>().join(","),
            None => format!("{}#{}", n.name, n.id),
        };
        writeln!(text, "{alias}\t-\t-\t{}", n.interval).unwrap();
        for a in g.attributes_of(n.id) {
            let values = g.values_of(a.id);
            if values.is_empty() {
                writeln!(text, "{alias}\t{}\t-\t{}", a.name, a.interval).unwrap();
            }
            for v in values {
                writeln!(text, "{alias}\t{}\t{}\t{}", a.name, v.name, v.interval).unwrap();
            }
        }
    }
    text
}
