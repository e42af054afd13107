//! The `.tgraph.json` document format.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "name": "people",
//!   "granularity": "year",
//!   "nodes": [
//!     { "id": 1, "kind": "object", "name": "Person", "intervals": "[[1990-Now]]" }
//!   ],
//!   "edges": [ { "from": 1, "to": 2 } ]
//! }
//! ```
//!
//! Saved documents are canonical: nodes sorted by id, edges by `(from, to)`,
//! two-space indentation and a trailing newline.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::model::{
    validate, ConstraintViolation, GraphError, Node, NodeId, NodeKind, StructuralEdge,
    TemporalGraph,
};
use crate::temporal::TemporalElement;

pub const SCHEMA_VERSION: &str = "1";
pub const FILE_EXTENSION: &str = ".tgraph.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub schema_version: String,
    pub name: String,
    pub granularity: String,
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: u64,
    pub kind: NodeKind,
    pub name: String,
    #[serde(with = "element_text")]
    pub intervals: TemporalElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: u64,
    pub to: u64,
}

mod element_text {
    use super::*;

    pub fn serialize<S: Serializer>(e: &TemporalElement, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(e)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<TemporalElement, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema_version `{0}` (expected \"1\")")]
    UnsupportedSchema(String),
    #[error(transparent)]
    Structural(#[from] GraphError),
    #[error("graph violates {} constraint(s)", .0.len())]
    ValidationFailed(Vec<ConstraintViolation>),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Keep graphs that fail validation, returning violations as warnings.
    pub permissive: bool,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub graph: TemporalGraph,
    pub warnings: Vec<ConstraintViolation>,
}

impl GraphDocument {
    pub fn from_graph(g: &TemporalGraph) -> Self {
        GraphDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            name: g.name().to_string(),
            granularity: g.granularity().to_string(),
            nodes: g
                .nodes()
                .iter()
                .map(|n| NodeRecord {
                    id: n.id.0,
                    kind: n.kind,
                    name: n.name.clone(),
                    intervals: n.interval.clone(),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    from: e.from.0,
                    to: e.to.0,
                })
                .collect(),
        }
    }

    pub fn into_graph(self) -> Result<TemporalGraph, LoadError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(LoadError::UnsupportedSchema(self.schema_version));
        }
        let mut b = TemporalGraph::builder(self.name).granularity(self.granularity);
        for n in self.nodes {
            b.push_node(Node {
                id: NodeId(n.id),
                kind: n.kind,
                name: n.name,
                interval: n.intervals,
            });
        }
        for e in self.edges {
            b.push_edge(StructuralEdge::new(e.from, e.to));
        }
        Ok(b.build()?)
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, LoadError> {
        serde_json::from_slice(bytes).map_err(|e| LoadError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("documents always serialize");
        out.push(b'\n');
        out
    }
}

/// Parses and validates a document.
pub fn load(bytes: &[u8], opts: LoadOptions) -> Result<Loaded, LoadError> {
    let graph = GraphDocument::parse(bytes)?.into_graph()?;
    let violations = validate(&graph);
    if !violations.is_empty() && !opts.permissive {
        return Err(LoadError::ValidationFailed(violations));
    }
    Ok(Loaded {
        graph,
        warnings: violations,
    })
}

pub fn load_file(path: impl AsRef<Path>, opts: LoadOptions) -> Result<Loaded, LoadError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load(&bytes, opts)
}

/// Canonical document bytes for `g`.
pub fn save(g: &TemporalGraph) -> Vec<u8> {
    GraphDocument::from_graph(g).to_bytes()
}
