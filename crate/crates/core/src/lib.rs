//! An in-memory temporal graph database.
//!
//! Graphs are attribute graphs whose nodes (objects, reified edges,
//! attributes and values) each carry a temporal element. Queries are written
//! in TEG-QL, a `SELECT ... FROM <paths> WHERE ...` language with `SNAPSHOT`
//! and `IN` temporal modifiers, and can be evaluated natively or transpiled
//! to Cypher text.

pub mod cypher;
pub mod engine;
pub mod io;
pub mod model;
pub mod query;
pub mod temporal;

pub use engine::{evaluate, EngineError, QueryOutcome};
pub use model::{Node, NodeId, NodeKind, TemporalGraph};
pub use query::parse;
pub use temporal::{Instant, Interval, IntervalEnd, TemporalElement};
